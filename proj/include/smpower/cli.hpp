#pragma once

/*!
  \file cli.hpp
  \brief The `smpower` command line

  Commands: generate, verify, measure, optimize, report, histogram.
  Exit codes: 0 success, 1 verification or equivalence failure, 2 usage error.
  Relative output paths are resolved against $SMPOWER_OUT_DIR when it is set.
*/

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace smpower
{

constexpr std::string_view version = "0.1.0";

constexpr int exit_success = 0;
constexpr int exit_failure = 1;
constexpr int exit_usage = 2;

/*! \brief Runs one command; `args` excludes the program name. */
int run_cli( std::vector<std::string> const& args, std::ostream& out, std::ostream& err );

} // namespace smpower
