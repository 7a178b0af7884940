#include <smpower/search.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include <smpower/mapping.hpp>
#include <smpower/rewrite.hpp>

namespace smpower
{

namespace
{

uint64_t splitmix64( uint64_t x )
{
  x += 0x9e3779b97f4a7c15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
  return x ^ ( x >> 31 );
}

bool needs_swact( selection_metric m )
{
  return m != selection_metric::transistors;
}

/* runs fn(0..n-1) on up to `threads` workers; the first exception is rethrown */
template<typename Fn>
void parallel_for( uint32_t n, uint32_t threads, Fn&& fn )
{
  threads = std::max( 1u, std::min( threads, n ) );
  if ( threads == 1u )
  {
    for ( uint32_t i = 0; i < n; ++i )
      fn( i );
    return;
  }
  std::atomic<uint32_t> next{ 0u };
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for ( uint32_t t = 0; t < threads; ++t )
  {
    workers.emplace_back( [&] {
      for ( uint32_t i = next++; i < n; i = next++ )
      {
        try
        {
          fn( i );
        }
        catch ( ... )
        {
          std::lock_guard lock( failure_mutex );
          if ( !failure )
            failure = std::current_exception();
        }
      }
    } );
  }
  for ( auto& w : workers )
    w.join();
  if ( failure )
    std::rethrow_exception( failure );
}

uint32_t resolve_threads( uint32_t threads )
{
  return threads != 0u ? threads : std::max( 1u, std::thread::hardware_concurrency() );
}

std::string format_double( double v )
{
  char buffer[32];
  std::snprintf( buffer, sizeof( buffer ), "%.6f", v );
  return buffer;
}

} // namespace

std::string_view to_string( selection_metric m )
{
  switch ( m )
  {
  case selection_metric::transistors: return "transistors";
  case selection_metric::swact: return "swact";
  case selection_metric::both: return "both";
  }
  return "?";
}

std::optional<selection_metric> selection_metric_from_string( std::string_view name )
{
  for ( auto m : { selection_metric::transistors, selection_metric::swact, selection_metric::both } )
    if ( to_string( m ) == name )
      return m;
  return std::nullopt;
}

uint64_t derive_seed( uint64_t seed, uint64_t index )
{
  return splitmix64( seed ^ splitmix64( index + 0x632be59bd9b4e019ull ) );
}

void opt_config::validate() const
{
  if ( runs == 0u || iterations == 0u || chain_length == 0u || parallel_chains == 0u )
    throw error( "runs, iterations, chain length and parallel chains must be positive" );
  if ( search_cycles < 2u )
    throw error( "search cycles must be at least 2" );
  if ( final_metric == selection_metric::both )
    throw error( "the final metric must be transistors or swact" );
  swact_spec.validate();
}

bool better( metric_value const& a, metric_value const& b, selection_metric m )
{
  auto activity = []( metric_value const& v ) {
    if ( !v.swact )
      throw error( "switching activity was not measured" );
    return *v.swact;
  };
  switch ( m )
  {
  case selection_metric::transistors:
    return a.transistors < b.transistors;
  case selection_metric::swact:
    return activity( a ) < activity( b );
  case selection_metric::both:
    if ( a.transistors != b.transistors )
      return a.transistors < b.transistors;
    return activity( a ) < activity( b );
  }
  return false;
}

circuit_evaluator::circuit_evaluator( stimulus_spec const& spec, uint32_t cycles )
{
  auto s = spec;
  s.cycles = cycles;
  patterns_ = stimulus_patterns( s );
}

cell_netlist circuit_evaluator::map( aig_network const& aig ) const
{
  return from_aig( aig );
}

metric_value circuit_evaluator::measure( cell_netlist const& n, bool with_swact ) const
{
  metric_value v;
  v.transistors = transistor_count( n );
  if ( with_swact )
    v.swact = swact( n, patterns_ );
  return v;
}

metric_value circuit_evaluator::measure( aig_network const& aig, bool with_swact ) const
{
  return measure( map( aig ), with_swact );
}

chain_result run_chain( aig_network const& start, uint32_t length, uint64_t chain_seed, circuit_evaluator const& eval,
                        selection_metric metric, uint32_t scatter_every, recipe_picker const& picker,
                        recipe_applier const& apply )
{
  if ( length == 0u )
    throw error( "chain length must be positive" );

  chain_result result;
  result.best = start;
  result.best_metric = eval.measure( start, needs_swact( metric ) );
  result.steps.reserve( length );

  aig_network current = start;
  for ( uint32_t k = 0; k < length; ++k )
  {
    auto const step_seed = derive_seed( chain_seed, k );
    auto const id = picker ? picker( k ) : static_cast<uint32_t>( splitmix64( step_seed ) % num_recipes );
    uint32_t const applications = is_compression( id ) ? 3u : 1u;
    for ( uint32_t a = 0; a < applications; ++a )
      current = apply ? apply( current, id, derive_seed( step_seed, a ) ) : apply_recipe( current, id, derive_seed( step_seed, a ) );

    bool const annotate = needs_swact( metric ) || ( scatter_every != 0u && ( k + 1u ) % scatter_every == 0u );
    auto const m = eval.measure( current, annotate );

    step_record r;
    r.step = k;
    r.recipe = id;
    r.applications = applications;
    r.nodes = current.num_gates();
    r.transistors = m.transistors;
    r.swact = m.swact;
    result.steps.push_back( r );

    if ( better( m, result.best_metric, metric ) )
    {
      result.best = current;
      result.best_metric = m;
    }
  }
  return result;
}

namespace
{

run_result run_iterations_impl( aig_network const& start, opt_config const& cfg, uint32_t run_index,
                                circuit_evaluator const& eval, uint32_t chain_threads )
{
  auto const begin = std::chrono::steady_clock::now();
  run_result result;
  result.trace.run = run_index;
  result.trace.seed = derive_seed( cfg.master_seed, run_index );
  result.best = start;
  result.trace.start = eval.measure( start, needs_swact( cfg.iter_metric ) );
  result.trace.best = result.trace.start;

  for ( uint32_t i = 0; i < cfg.iterations; ++i )
  {
    auto const iteration_seed = derive_seed( result.trace.seed, i );
    std::vector<chain_result> chains( cfg.parallel_chains );
    parallel_for( cfg.parallel_chains, chain_threads, [&]( uint32_t j ) {
      chains[j] = run_chain( result.best, cfg.chain_length, derive_seed( iteration_seed, j ), eval, cfg.iter_metric, cfg.scatter_every, {}, cfg.apply );
    } );

    /* barrier: keep the best chain result if it improves the incumbent */
    std::optional<uint32_t> winner;
    for ( uint32_t j = 0; j < cfg.parallel_chains; ++j )
    {
      auto const& reference = winner ? chains[*winner].best_metric : result.trace.best;
      if ( better( chains[j].best_metric, reference, cfg.iter_metric ) )
        winner = j;
    }
    for ( uint32_t j = 0; j < cfg.parallel_chains; ++j )
    {
      for ( auto r : chains[j].steps )
      {
        r.run = run_index;
        r.iteration = i;
        r.chain = j;
        result.trace.steps.push_back( r );
      }
    }
    if ( winner )
    {
      if ( !check_equivalence( start, chains[*winner].best ) )
        throw integrity_error( "run " + std::to_string( run_index ) + ", iteration " + std::to_string( i ) + ": incumbent is not equivalent to the start" );
      result.best = std::move( chains[*winner].best );
      result.trace.best = chains[*winner].best_metric;
    }
    result.trace.iteration_best.push_back( result.trace.best );
  }
  result.trace.wall_seconds = std::chrono::duration<double>( std::chrono::steady_clock::now() - begin ).count();
  return result;
}

} // namespace

run_result run_iterations( aig_network const& start, opt_config const& cfg, uint32_t run_index, circuit_evaluator const& eval )
{
  cfg.validate();
  return run_iterations_impl( start, cfg, run_index, eval, resolve_threads( cfg.threads ) );
}

optimize_result optimize( cell_netlist const& start, opt_config const& cfg )
{
  cfg.validate();
  if ( auto const issues = start.validate(); !issues.empty() )
    throw error( "start netlist is invalid: " + issues.front().message );

  auto const start_aig = to_aig( start );
  circuit_evaluator const search_eval( cfg.swact_spec, cfg.search_cycles );
  circuit_evaluator const final_eval( cfg.swact_spec, cfg.swact_spec.cycles );

  auto const threads = resolve_threads( cfg.threads );
  uint32_t const run_threads = std::min( threads, cfg.runs );
  uint32_t const chain_threads = std::max( 1u, threads / run_threads );

  std::vector<aig_network> bests( cfg.runs );
  optimize_result result;
  result.traces.resize( cfg.runs );
  result.run_finals.resize( cfg.runs );
  std::vector<cell_netlist> mapped( cfg.runs );

  parallel_for( cfg.runs, run_threads, [&]( uint32_t r ) {
    auto run = run_iterations_impl( start_aig, cfg, r, search_eval, chain_threads );
    mapped[r] = final_eval.map( run.best );
    result.run_finals[r] = final_eval.measure( mapped[r], true );
    bests[r] = std::move( run.best );
    result.traces[r] = std::move( run.trace );
  } );

  uint32_t winner = 0;
  for ( uint32_t r = 1; r < cfg.runs; ++r )
    if ( better( result.run_finals[r], result.run_finals[winner], cfg.final_metric ) )
      winner = r;

  if ( !check_equivalence( start_aig, bests[winner] ) || !check_equivalence( start_aig, to_aig( mapped[winner] ) ) )
    throw integrity_error( "optimized circuit of run " + std::to_string( winner ) + " is not equivalent to the start" );

  result.winning_run = winner;
  result.best = std::move( mapped[winner] );
  result.best_metric = result.run_finals[winner];
  return result;
}

std::string trace_csv( std::vector<run_trace> const& traces )
{
  std::string csv = "run,iteration,chain,step,recipe,applications,nodes,transistors,swact\n";
  for ( auto const& t : traces )
  {
    for ( auto const& s : t.steps )
    {
      csv += std::to_string( s.run ) + ',' + std::to_string( s.iteration ) + ',' + std::to_string( s.chain ) + ',' +
             std::to_string( s.step ) + ',' + std::string( recipe( s.recipe ).name ) + ',' + std::to_string( s.applications ) + ',' +
             std::to_string( s.nodes ) + ',' + std::to_string( s.transistors ) + ',' + ( s.swact ? format_double( *s.swact ) : std::string{} ) + '\n';
    }
  }
  return csv;
}

pareto_result pareto_scatter( std::vector<run_trace> const& traces )
{
  pareto_result p;
  for ( auto const& t : traces )
    for ( auto const& s : t.steps )
      if ( s.swact )
        p.points.push_back( { s.transistors, *s.swact, s.run, s.iteration, s.step } );
  if ( p.points.empty() )
    return p;

  std::vector<size_t> order( p.points.size() );
  for ( size_t i = 0; i < order.size(); ++i )
    order[i] = i;
  std::stable_sort( order.begin(), order.end(), [&]( size_t a, size_t b ) {
    auto const& x = p.points[a];
    auto const& y = p.points[b];
    return x.transistors != y.transistors ? x.transistors < y.transistors : x.swact < y.swact;
  } );

  p.best_area = order.front();
  double lowest = std::numeric_limits<double>::infinity();
  for ( auto i : order )
  {
    if ( p.points[i].swact < lowest )
    {
      p.front.push_back( i );
      lowest = p.points[i].swact;
    }
  }
  /* the last front point has the lowest activity and the fewest transistors among those */
  p.best_power = p.front.back();
  return p;
}

std::string scatter_csv( pareto_result const& p )
{
  std::vector<bool> on_front( p.points.size(), false );
  for ( auto i : p.front )
    on_front[i] = true;
  std::string csv = "transistors,swact,run,iteration,step,pareto\n";
  for ( size_t i = 0; i < p.points.size(); ++i )
  {
    auto const& pt = p.points[i];
    csv += std::to_string( pt.transistors ) + ',' + format_double( pt.swact ) + ',' + std::to_string( pt.run ) + ',' +
           std::to_string( pt.iteration ) + ',' + std::to_string( pt.step ) + ',' + ( on_front[i] ? "1" : "0" ) + '\n';
  }
  return csv;
}

} // namespace smpower
