#pragma once

/*!
  \file sim.hpp
  \brief Cycle-based zero-delay simulation and the switching-activity model

  Every wire toggle between two consecutive cycles is weighted by the wire's
  fan-out cost (transistors of all reading cells). The switching activity
  `s` is the weighted toggle sum divided by the number of transitions,
  `cycles - 1`. Output ports have no readers and contribute nothing.

  Stimuli are i.i.d. per operand and cycle: a Box-Muller normal sample
  (mt19937_64, 53-bit uniforms, both outputs of each pair consumed in order)
  scaled by sigma and shifted by mu, rounded half away from zero, and clipped
  into the operand range.
*/

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <smpower/formats.hpp>
#include <smpower/netlist.hpp>

namespace smpower
{

constexpr std::string_view stimulus_generator_name = "mt19937_64/box-muller/round-half-away";

struct stimulus_spec
{
  double sigma = 3.0;
  double mu = 0.0;
  uint32_t cycles = 10000u;
  uint64_t seed = 1u;
  value_range range{ -8, 7 };
  uint32_t operands = 2u;
  format encoding = format::tc; /*!< how sampled values are applied to the input ports */
  uint32_t width = 4u;

  /*! \brief Throws `error` when sigma <= 0, cycles < 2, or the range does not fit the encoding. */
  void validate() const;
};

/*! \brief Operand values, cycle-major: entry `t * operands + k` is operand k at cycle t. */
std::vector<int64_t> sample_stimuli( stimulus_spec const& spec );

/*! \brief Packs sampled values into input-port patterns (operand k occupies bits [k*w, (k+1)*w)). */
std::vector<uint64_t> encode_stimuli( stimulus_spec const& spec, std::span<int64_t const> values );

/*! \brief `encode_stimuli( spec, sample_stimuli( spec ) )` */
std::vector<uint64_t> stimulus_patterns( stimulus_spec const& spec );

struct sim_trace
{
  uint32_t cycles = 0;
  std::vector<uint64_t> toggles; /*!< per wire */
};

/*! \brief Simulates one input pattern per cycle (bit-parallel over cycles) and counts toggles per wire. */
sim_trace simulate_toggles( cell_netlist const& n, std::span<uint64_t const> patterns );

struct swact_report
{
  double s = 0.0; /*!< a.u.; for configurations this is s_tot */
  std::optional<double> s_enc;
  std::optional<double> s_mult;
  double sigma = 0.0;
  uint32_t cycles = 0;
  uint64_t seed = 0;
  std::string generator{ stimulus_generator_name };
};

/*! \brief Switching activity of an explicit pattern stream (at least two cycles). */
double swact( cell_netlist const& n, std::span<uint64_t const> patterns );

/*! \brief Switching activity under sampled stimuli.

  Throws `error` when the netlist's input count differs from operands * width.
*/
swact_report swact( cell_netlist const& n, stimulus_spec const& spec );

/*! \brief Total of a decomposed configuration: s_tot = 2 s_enc + s_mult (s_enc = 0 without encoder).

  Throws `error` when the reports disagree on sigma or cycles.
*/
swact_report config_swact( std::optional<swact_report> const& enc, swact_report const& mult );

/*! \brief Per-wire CSV rows `wire,toggles,fanout_cost,weighted`. */
std::string toggle_table_csv( cell_netlist const& n, sim_trace const& trace );

struct value_histogram_result
{
  std::map<int64_t, uint64_t> inputs;  /*!< all operands pooled */
  std::map<int64_t, uint64_t> outputs; /*!< empty unless a model was supplied */
};

using binary_model = std::function<int64_t( int64_t, int64_t )>;

/*! \brief Histogram of sampled operands and, for two-operand specs with a model, of the model's outputs. */
value_histogram_result value_histogram( stimulus_spec const& spec, binary_model const& through = {} );

/*! \brief CSV rows `value,count`. */
std::string histogram_csv( std::map<int64_t, uint64_t> const& histogram );

} // namespace smpower
