#pragma once

/*!
  \file netlist_io.hpp
  \brief JSON interchange format for cell netlists

  \verbatim
  { "name": "mul_tc_tc",
    "inputs": ["a[0]", ...], "outputs": ["p[0]", ...],
    "cells": [ { "id": "c0", "kind": "NAND2", "inputs": ["a[0]", "b[3]"], "output": "n12" }, ... ] }
  \endverbatim
*/

#include <filesystem>
#include <string>

#include <json.hpp>

#include <smpower/netlist.hpp>

namespace smpower
{

nlohmann::json to_json( cell_netlist const& n );

/*! \brief Parses the interchange format. Throws `error` on malformed documents (not on invalid graphs). */
cell_netlist netlist_from_json( nlohmann::json const& doc );

std::string write_netlist_string( cell_netlist const& n );
cell_netlist read_netlist_string( std::string const& text );

void write_netlist_file( cell_netlist const& n, std::filesystem::path const& path );
cell_netlist read_netlist_file( std::filesystem::path const& path );

} // namespace smpower
