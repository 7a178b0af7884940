#pragma once

/*!
  \file configurations.hpp
  \brief Hardware configurations A to E and their power/area reports

  A configuration is an optional encoder, applied to both operands, followed
  by a multiplier. Totals count the encoder twice:
  s_tot = 2 s_enc + s_mult, t_tot = 2 t_e + t_m, d_tot = d_e + d_m.
*/

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <smpower/generators.hpp>
#include <smpower/netlist.hpp>
#include <smpower/sim.hpp>

namespace smpower
{

enum class config_id : uint8_t
{
  A,
  B,
  C,
  D,
  E
};

constexpr std::array<config_id, 5> all_configs{ config_id::A, config_id::B, config_id::C, config_id::D, config_id::E };

struct configuration
{
  config_id id;
  std::optional<block_kind> encoder;
  block_kind multiplier;
};

configuration const& config( config_id id );
char to_char( config_id id );
std::optional<config_id> config_from_string( std::string_view name );

/*! \brief Stimulus of a block at its own input: its operand range, encoding and operand count. */
stimulus_spec block_stimulus( block_spec const& spec, double sigma, uint32_t cycles, uint64_t seed );

/*! \brief Copies `sub` into `into`, driving its inputs from `inputs`; returns the wires of its outputs. */
std::vector<wire_id> instantiate( cell_netlist& into, cell_netlist const& sub, std::vector<wire_id> const& inputs,
                                  std::string const& prefix );

/*! \brief End-to-end circuit on two TC operands: encoder per operand (if any), then the multiplier. */
cell_netlist composite_netlist( cell_netlist const* encoder, cell_netlist const& multiplier, uint32_t width );

/*! \brief Supplies the netlist used for a block (generated, loaded or optimized). */
using block_source = std::function<cell_netlist( block_spec const& )>;

block_source generated_blocks();

/*! \brief Composite of a configuration built from `source`. */
cell_netlist composite_netlist( config_id id, uint32_t width, block_source const& source );

struct config_swact_row
{
  config_id id;
  double sigma = 0.0;
  double s_enc = 0.0;
  double s_mult = 0.0;
  double s_tot = 0.0;
  double delta_percent = 0.0; /*!< against configuration A at the same sigma */
};

struct config_area_row
{
  config_id id;
  uint64_t t_e = 0;
  uint64_t t_m = 0;
  uint64_t t_tot = 0;
  double t_delta_percent = 0.0;
  uint32_t d_e = 0;
  uint32_t d_m = 0;
  uint32_t d_tot = 0;
  double d_delta_percent = 0.0;
};

struct report_options
{
  std::vector<config_id> configs{ all_configs.begin(), all_configs.end() };
  std::vector<double> sigmas{ 2.0, 3.0, 4.0 };
  uint32_t width = 4u;
  uint32_t cycles = 10000u;
  uint64_t seed = 1u;
};

/*! \brief Relative change in percent; negative is an improvement. */
double delta_percent( double value, double reference );

/*! \brief Switching activity rows, sigma-major. Configuration A is always evaluated as the reference. */
std::vector<config_swact_row> swact_table( report_options const& opts, block_source const& source );
std::vector<config_area_row> area_table( report_options const& opts, block_source const& source );

std::string swact_table_csv( std::vector<config_swact_row> const& rows );
std::string area_table_csv( std::vector<config_area_row> const& rows );

/*! \brief One decimal, e.g. "-12.9". */
std::string format_percent( double value );

} // namespace smpower
