#pragma once

/*!
  \file search.hpp
  \brief Guided random-walk design-space exploration

  A chain applies uniformly drawn recipes step by step (a compression recipe
  is applied three times in a row and counts as one step) and remembers its
  best circuit. An iteration starts `parallel_chains` chains from the
  incumbent and keeps the best result; a run is a sequence of iterations; the
  final winner is selected across independent runs.

  Seeds are derived from the master seed with splitmix64:
  run r uses derive(master, r); chain j of iteration i uses
  derive(derive(run_seed, i), j); step k uses derive(chain_seed, k); the
  recipe of a step is splitmix64(step_seed) mod 30; application a of a step
  uses derive(step_seed, a).
*/

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <smpower/aig.hpp>
#include <smpower/netlist.hpp>
#include <smpower/sim.hpp>

namespace smpower
{

enum class selection_metric : uint8_t
{
  transistors,
  swact,
  both /*!< lexicographic: transistors, then switching activity */
};

std::string_view to_string( selection_metric m );
std::optional<selection_metric> selection_metric_from_string( std::string_view name );

uint64_t derive_seed( uint64_t seed, uint64_t index );

class integrity_error : public error
{
public:
  using error::error;
};

struct opt_config
{
  uint32_t runs = 20u;
  uint32_t iterations = 10u;
  uint32_t chain_length = 20u;
  uint32_t parallel_chains = 1u;
  selection_metric iter_metric = selection_metric::transistors;
  selection_metric final_metric = selection_metric::swact;
  stimulus_spec swact_spec{}; /*!< operand range, encoding and sigma of the block; `cycles` is used for the final ranking */
  uint32_t search_cycles = 2000u; /*!< cycles for switching activity during the search (same seed as the final ranking) */
  uint64_t master_seed = 1u;
  uint32_t scatter_every = 0u; /*!< if nonzero, every k-th step is annotated with switching activity */
  uint32_t threads = 0u;       /*!< 0 = hardware concurrency */
  /*! \brief Recipe application; defaults to `apply_recipe` (replaceable in tests). */
  std::function<aig_network( aig_network const&, uint32_t, uint64_t )> apply{};

  /*! \brief Throws `error` when a count is zero or `final_metric` is `both`. */
  void validate() const;
  uint64_t steps_per_run() const { return uint64_t{ iterations } * chain_length * parallel_chains; }
};

struct metric_value
{
  uint64_t transistors = 0;
  std::optional<double> swact;
};

/*! \brief Strict "a is better than b" under a metric. */
bool better( metric_value const& a, metric_value const& b, selection_metric m );

struct step_record
{
  uint32_t run = 0;
  uint32_t iteration = 0;
  uint32_t chain = 0;
  uint32_t step = 0;
  uint32_t recipe = 0;
  uint32_t applications = 0; /*!< 3 for compression recipes, 1 otherwise */
  uint32_t nodes = 0;
  uint64_t transistors = 0;
  std::optional<double> swact;
};

struct run_trace
{
  uint32_t run = 0;
  uint64_t seed = 0;
  metric_value start;
  std::vector<step_record> steps;
  std::vector<metric_value> iteration_best; /*!< incumbent after each iteration */
  metric_value best;
  double wall_seconds = 0.0;
};

/*! \brief Maps AIGs to cells and measures them; shared read-only between threads. */
class circuit_evaluator
{
public:
  /*! \brief `spec` describes the stimulus; patterns use `cycles` cycles of it. */
  circuit_evaluator( stimulus_spec const& spec, uint32_t cycles );

  cell_netlist map( aig_network const& aig ) const;
  metric_value measure( cell_netlist const& n, bool with_swact ) const;
  metric_value measure( aig_network const& aig, bool with_swact ) const;

private:
  std::vector<uint64_t> patterns_;
};

using recipe_picker = std::function<uint32_t( uint32_t step )>;
using recipe_applier = std::function<aig_network( aig_network const&, uint32_t id, uint64_t seed )>;

struct chain_result
{
  aig_network best;
  metric_value best_metric;
  std::vector<step_record> steps;
};

/*! \brief One chain of `length` steps from `start`; throws `error` when length is 0. */
chain_result run_chain( aig_network const& start, uint32_t length, uint64_t chain_seed, circuit_evaluator const& eval,
                        selection_metric metric, uint32_t scatter_every = 0u, recipe_picker const& picker = {},
                        recipe_applier const& apply = {} );

struct run_result
{
  aig_network best;
  run_trace trace;
};

/*! \brief Iterations restarting from the incumbent; the incumbent never gets worse.

  Each new incumbent is checked for equivalence with `start` (throws `integrity_error`).
*/
run_result run_iterations( aig_network const& start, opt_config const& cfg, uint32_t run_index, circuit_evaluator const& eval );

struct optimize_result
{
  cell_netlist best;
  metric_value best_metric; /*!< switching activity at the final cycle count */
  uint32_t winning_run = 0;
  std::vector<metric_value> run_finals; /*!< final metric of every run's best */
  std::vector<run_trace> traces;
};

/*! \brief Runs the complete search; the winner is exhaustively checked against `start`.

  Throws `integrity_error` if the winner is not equivalent to the start.
*/
optimize_result optimize( cell_netlist const& start, opt_config const& cfg );

/*! \brief Trace CSV `run,iteration,chain,step,recipe,applications,nodes,transistors,swact`. */
std::string trace_csv( std::vector<run_trace> const& traces );

struct scatter_point
{
  uint64_t transistors = 0;
  double swact = 0.0;
  uint32_t run = 0;
  uint32_t iteration = 0;
  uint32_t step = 0;
};

struct pareto_result
{
  std::vector<scatter_point> points;
  std::vector<size_t> front;   /*!< indices of non-dominated points, by transistors */
  std::optional<size_t> best_area;  /*!< fewest transistors, ties by activity */
  std::optional<size_t> best_power; /*!< lowest activity, ties by transistors */
};

/*! \brief Scatter of all activity-annotated trace entries. */
pareto_result pareto_scatter( std::vector<run_trace> const& traces );

/*! \brief CSV `transistors,swact,run,iteration,step,pareto`. */
std::string scatter_csv( pareto_result const& p );

} // namespace smpower
