#include <smpower/cli.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include <smpower/configurations.hpp>
#include <smpower/generators.hpp>
#include <smpower/mapping.hpp>
#include <smpower/netlist_io.hpp>
#include <smpower/search.hpp>
#include <smpower/sim.hpp>

namespace smpower
{

namespace
{

namespace fs = std::filesystem;

class usage_error : public error
{
public:
  using error::error;
};

class check_failure : public error
{
public:
  using error::error;
};

fs::path resolve_output( std::string const& path )
{
  fs::path p( path );
  if ( p.is_relative() )
  {
    if ( auto const* dir = std::getenv( "SMPOWER_OUT_DIR" ); dir != nullptr && *dir != '\0' )
      return fs::path( dir ) / p;
  }
  return p;
}

void ensure_writable( fs::path const& path, bool force )
{
  if ( fs::exists( path ) && !force )
    throw usage_error( "refusing to overwrite " + path.string() + " (use --force)" );
}

void write_text( fs::path const& path, std::string const& text )
{
  if ( path.has_parent_path() )
    fs::create_directories( path.parent_path() );
  std::ofstream os( path, std::ios::binary );
  if ( !os )
    throw error( "cannot write " + path.string() );
  os << text;
  if ( !os )
    throw error( "write failed: " + path.string() );
}

std::string hex64( uint64_t v )
{
  char buffer[24];
  std::snprintf( buffer, sizeof( buffer ), "%016llx", static_cast<unsigned long long>( v ) );
  return buffer;
}

nlohmann::json manifest( std::string_view command, nlohmann::json seeds )
{
  return { { "tool", "smpower" },
           { "version", std::string( version ) },
           { "command", std::string( command ) },
           { "seeds", std::move( seeds ) },
           { "cost_table_hash", hex64( cost_table_hash() ) },
           { "stimulus_generator", std::string( stimulus_generator_name ) } };
}

/* CSV with an optional leading comment line carrying the manifest */
std::string with_manifest( std::string const& csv, std::optional<nlohmann::json> const& m )
{
  return m ? "# " + m->dump() + "\n" + csv : csv;
}

block_kind parse_block( std::string const& name )
{
  auto const b = block_from_string( name );
  if ( !b )
  {
    std::string known;
    for ( auto k : all_blocks )
      known += ( known.empty() ? "" : ", " ) + std::string( info( k ).name );
    throw usage_error( "unknown block '" + name + "' (expected one of " + known + ")" );
  }
  return *b;
}

block_spec parse_block_spec( std::string const& name, uint32_t width )
{
  block_spec spec{ parse_block( name ), width };
  if ( width < 2u || width > 16u )
    throw usage_error( "width must be in [2, 16]" );
  return spec;
}

cell_netlist load_netlist( std::string const& path )
{
  if ( !fs::exists( path ) )
    throw usage_error( "no such file: " + path );
  return read_netlist_file( path );
}

void check_interface( cell_netlist const& n, block_spec const& spec )
{
  if ( n.inputs().size() != num_input_bits( spec ) || n.outputs().size() != num_output_bits( spec ) )
  {
    throw usage_error( "netlist has " + std::to_string( n.inputs().size() ) + " inputs and " + std::to_string( n.outputs().size() ) +
                       " outputs; " + std::string( info( spec.block ).name ) + " at width " + std::to_string( spec.width ) +
                       " needs " + std::to_string( num_input_bits( spec ) ) + " and " + std::to_string( num_output_bits( spec ) ) );
  }
}

void require_valid( cell_netlist const& n )
{
  auto const issues = n.validate();
  if ( !issues.empty() )
  {
    std::string text = "invalid netlist:";
    for ( auto const& i : issues )
      text += "\n  " + i.kind + ": " + i.message;
    throw check_failure( text );
  }
}

template<typename T>
std::vector<T> split_list( std::string const& text, auto parse )
{
  std::vector<T> items;
  std::stringstream ss( text );
  std::string item;
  while ( std::getline( ss, item, ',' ) )
  {
    if ( !item.empty() )
      items.push_back( parse( item ) );
  }
  if ( items.empty() )
    throw usage_error( "empty list: '" + text + "'" );
  return items;
}

/* ---------------------------------------------------------------- generate */

struct generate_options
{
  std::string block;
  uint32_t width = 4u;
  std::string output;
  bool force = false;
};

int cmd_generate( generate_options const& o, std::ostream& out )
{
  auto const spec = parse_block_spec( o.block, o.width );
  auto const path = resolve_output( o.output.empty() ? std::string( info( spec.block ).name ) + ".json" : o.output );
  ensure_writable( path, o.force );
  auto const n = build_block( spec );
  write_text( path, write_netlist_string( n ) );
  auto const m = measure( n );
  out << "wrote " << path.string() << " (" << n.inputs().size() << " inputs, " << n.outputs().size() << " outputs, " << m.cell_count
      << " cells, " << m.transistors << " transistors)\n";
  return exit_success;
}

/* ------------------------------------------------------------------ verify */

struct verify_options
{
  std::string netlist;
  std::string block;
  uint32_t width = 4u;
};

int cmd_verify( verify_options const& o, std::ostream& out )
{
  auto const spec = parse_block_spec( o.block, o.width );
  auto const n = load_netlist( o.netlist );
  check_interface( n, spec );
  require_valid( n );
  auto const r = verify_exhaustive( n, spec );
  if ( !r.ok() )
  {
    out << info( spec.block ).name << ": FAIL " << r.passed << "/" << r.checked << " pass\n";
    out << "counterexample: " << r.failure->describe() << "\n";
    return exit_failure;
  }
  out << info( spec.block ).name << ": " << r.passed << "/" << r.checked << " pass\n";
  return exit_success;
}

/* ----------------------------------------------------------------- measure */

struct measure_options
{
  std::string netlist;
  std::string block;
  uint32_t width = 4u;
  double sigma = 3.0;
  uint32_t cycles = 10000u;
  uint64_t seed = 1u;
  std::string toggles;
  bool force = false;
};

int cmd_measure( measure_options const& o, std::ostream& out )
{
  auto const n = load_netlist( o.netlist );
  require_valid( n );
  auto const m = measure( n );
  out << "metric,value\n";
  out << "cells," << m.cell_count << "\n";
  out << "transistors," << m.transistors << "\n";
  out << "depth," << m.depth << "\n";
  if ( o.block.empty() )
  {
    if ( !o.toggles.empty() )
      throw usage_error( "--toggles needs --block to define the stimulus" );
    return exit_success;
  }
  auto const spec = parse_block_spec( o.block, o.width );
  check_interface( n, spec );
  auto const stimulus = block_stimulus( spec, o.sigma, o.cycles, o.seed );
  auto const report = swact( n, stimulus );
  char buffer[64];
  std::snprintf( buffer, sizeof( buffer ), "%.6f", report.s );
  out << "swact," << buffer << "\n";
  if ( !o.toggles.empty() )
  {
    auto const path = resolve_output( o.toggles );
    ensure_writable( path, o.force );
    write_text( path, toggle_table_csv( n, simulate_toggles( n, stimulus_patterns( stimulus ) ) ) );
  }
  return exit_success;
}

/* ---------------------------------------------------------------- optimize */

struct optimize_options
{
  std::string netlist;
  std::string block;
  uint32_t width = 4u;
  uint32_t runs = 20u;
  uint32_t iterations = 10u;
  uint32_t chain = 20u;
  uint32_t parallel = 1u;
  std::string select = "transistors";
  std::string final_select = "swact";
  double sigma = 3.0;
  uint32_t cycles = 10000u;
  uint32_t search_cycles = 2000u;
  uint64_t seed = 1u;
  uint32_t scatter_every = 0u;
  uint32_t threads = 0u;
  std::string output;
  std::string trace;
  std::string scatter;
  std::string summary;
  bool manifest = false;
  bool force = false;
};

int cmd_optimize( optimize_options const& o, std::ostream& out, std::ostream& err )
{
  auto const spec = parse_block_spec( o.block, o.width );
  auto const start = load_netlist( o.netlist );
  check_interface( start, spec );
  require_valid( start );
  if ( auto const r = verify_exhaustive( start, spec ); !r.ok() )
    throw check_failure( "start netlist does not implement " + std::string( info( spec.block ).name ) + ": " + r.failure->describe() );

  opt_config cfg;
  cfg.runs = o.runs;
  cfg.iterations = o.iterations;
  cfg.chain_length = o.chain;
  cfg.parallel_chains = o.parallel;
  auto const iter_metric = selection_metric_from_string( o.select );
  auto const final_metric = selection_metric_from_string( o.final_select );
  if ( !iter_metric )
    throw usage_error( "--select must be transistors, swact or both" );
  if ( !final_metric || *final_metric == selection_metric::both )
    throw usage_error( "--final-select must be transistors or swact" );
  cfg.iter_metric = *iter_metric;
  cfg.final_metric = *final_metric;
  cfg.swact_spec = block_stimulus( spec, o.sigma, o.cycles, o.seed );
  cfg.search_cycles = o.search_cycles;
  cfg.master_seed = o.seed;
  cfg.scatter_every = o.scatter_every;
  cfg.threads = o.threads;
  try
  {
    cfg.validate();
  }
  catch ( error const& e )
  {
    throw usage_error( e.what() );
  }

  auto const winner_path = resolve_output( o.output.empty() ? std::string( info( spec.block ).name ) + ".opt.json" : o.output );
  std::vector<fs::path> paths{ winner_path };
  for ( auto const* p : { &o.trace, &o.scatter, &o.summary } )
    if ( !p->empty() )
      paths.push_back( resolve_output( *p ) );
  for ( auto const& p : paths )
    ensure_writable( p, o.force );

  optimize_result result;
  try
  {
    result = optimize( start, cfg );
  }
  catch ( integrity_error const& e )
  {
    err << "integrity error: " << e.what() << "\n";
    return exit_failure;
  }
  if ( auto const r = verify_exhaustive( result.best, spec ); !r.ok() )
  {
    err << "integrity error: optimized netlist fails verification: " << r.failure->describe() << "\n";
    return exit_failure;
  }

  std::optional<nlohmann::json> m;
  if ( o.manifest )
  {
    nlohmann::json seeds = { { "master", o.seed }, { "stimulus", o.seed } };
    for ( auto const& t : result.traces )
      seeds["runs"].push_back( t.seed );
    m = manifest( "optimize", seeds );
  }

  auto best = result.best;
  best.set_name( std::string( info( spec.block ).name ) + "_opt" );
  write_text( winner_path, write_netlist_string( best ) );
  if ( !o.trace.empty() )
    write_text( resolve_output( o.trace ), with_manifest( trace_csv( result.traces ), m ) );
  if ( !o.scatter.empty() )
    write_text( resolve_output( o.scatter ), with_manifest( scatter_csv( pareto_scatter( result.traces ) ), m ) );

  auto const start_metrics = measure( start );
  auto const best_metrics = measure( result.best );
  auto const start_swact = swact( start, cfg.swact_spec ).s;
  if ( !o.summary.empty() )
  {
    nlohmann::json summary = {
        { "block", std::string( info( spec.block ).name ) },
        { "width", spec.width },
        { "budget", { { "runs", cfg.runs }, { "iterations", cfg.iterations }, { "chain_length", cfg.chain_length }, { "parallel_chains", cfg.parallel_chains } } },
        { "iter_metric", std::string( to_string( cfg.iter_metric ) ) },
        { "final_metric", std::string( to_string( cfg.final_metric ) ) },
        { "sigma", o.sigma },
        { "cycles", o.cycles },
        { "search_cycles", o.search_cycles },
        { "master_seed", o.seed },
        { "winning_run", result.winning_run },
        { "start", { { "transistors", start_metrics.transistors }, { "depth", start_metrics.depth }, { "swact", start_swact } } },
        { "winner", { { "transistors", best_metrics.transistors }, { "depth", best_metrics.depth }, { "swact", *result.best_metric.swact } } } };
    if ( m )
      summary["manifest"] = *m;
    write_text( resolve_output( o.summary ), summary.dump( 2 ) + "\n" );
  }

  char buffer[160];
  std::snprintf( buffer, sizeof( buffer ), "transistors %llu -> %llu, depth %u -> %u, swact %.3f -> %.3f (run %u)\n",
                 static_cast<unsigned long long>( start_metrics.transistors ), static_cast<unsigned long long>( best_metrics.transistors ),
                 start_metrics.depth, best_metrics.depth, start_swact, *result.best_metric.swact, result.winning_run );
  out << buffer;
  out << "wrote " << winner_path.string() << "\n";
  return exit_success;
}

/* ------------------------------------------------------------------ report */

struct report_cli_options
{
  std::string configs = "A,B,C,D,E";
  std::string sigmas = "2,3,4";
  uint32_t width = 4u;
  uint32_t cycles = 10000u;
  uint64_t seed = 1u;
  std::string netlist_dir;
  bool equivalence_check = false;
  std::string swact_out;
  std::string area_out;
  bool manifest = false;
  bool force = false;
};

int cmd_report( report_cli_options const& o, std::ostream& out )
{
  report_options opts;
  opts.configs = split_list<config_id>( o.configs, []( std::string const& s ) {
    auto const c = config_from_string( s );
    if ( !c )
      throw usage_error( "unknown configuration '" + s + "'" );
    return *c;
  } );
  opts.sigmas = split_list<double>( o.sigmas, []( std::string const& s ) {
    try
    {
      size_t used = 0;
      auto const v = std::stod( s, &used );
      if ( used != s.size() || !( v > 0.0 ) )
        throw usage_error( "" );
      return v;
    }
    catch ( std::exception const& )
    {
      throw usage_error( "invalid sigma '" + s + "'" );
    }
  } );
  opts.width = o.width;
  opts.cycles = o.cycles;
  opts.seed = o.seed;
  if ( o.width < 2u || o.width > 16u )
    throw usage_error( "width must be in [2, 16]" );
  if ( o.cycles < 2u )
    throw usage_error( "cycles must be at least 2" );

  block_source source = generated_blocks();
  if ( !o.netlist_dir.empty() )
  {
    if ( !fs::is_directory( o.netlist_dir ) )
      throw usage_error( "no such directory: " + o.netlist_dir );
    source = [dir = fs::path( o.netlist_dir )]( block_spec const& spec ) {
      auto const path = dir / ( std::string( info( spec.block ).name ) + ".json" );
      if ( !fs::exists( path ) )
        return build_block( spec );
      auto n = read_netlist_file( path );
      check_interface( n, spec );
      require_valid( n );
      if ( auto const r = verify_exhaustive( n, spec ); !r.ok() )
        throw check_failure( path.string() + " does not implement " + std::string( info( spec.block ).name ) + ": " + r.failure->describe() );
      return n;
    };
  }

  std::vector<fs::path> paths;
  for ( auto const* p : { &o.swact_out, &o.area_out } )
    if ( !p->empty() )
      paths.push_back( resolve_output( *p ) );
  for ( auto const& p : paths )
    ensure_writable( p, o.force );

  if ( o.equivalence_check )
  {
    auto const reference = to_aig( composite_netlist( config_id::A, opts.width, source ) );
    auto const b = to_aig( composite_netlist( config_id::B, opts.width, source ) );
    if ( !check_equivalence( reference, b ) )
      throw check_failure( "configuration B is not equivalent to configuration A" );
    out << "equivalence: B == A on all " << ( uint64_t{ 1 } << ( 2u * opts.width ) ) << " input pairs\n";
  }

  std::optional<nlohmann::json> m;
  if ( o.manifest )
    m = manifest( "report", { { "stimulus", o.seed } } );

  auto const swact_csv = with_manifest( swact_table_csv( swact_table( opts, source ) ), m );
  auto const area_csv = with_manifest( area_table_csv( area_table( opts, source ) ), m );
  if ( o.swact_out.empty() )
    out << swact_csv;
  else
    write_text( resolve_output( o.swact_out ), swact_csv );
  if ( o.area_out.empty() )
    out << ( o.swact_out.empty() ? "\n" : "" ) << area_csv;
  else
    write_text( resolve_output( o.area_out ), area_csv );
  return exit_success;
}

/* --------------------------------------------------------------- histogram */

struct histogram_options
{
  std::string block = "mul-tc-tc";
  uint32_t width = 4u;
  double sigma = 3.0;
  uint32_t cycles = 10000u;
  uint64_t seed = 1u;
  bool outputs = false;
  std::string output;
  bool force = false;
};

int cmd_histogram( histogram_options const& o, std::ostream& out )
{
  auto const spec = parse_block_spec( o.block, o.width );
  auto const stimulus = block_stimulus( spec, o.sigma, o.cycles, o.seed );
  try
  {
    stimulus.validate();
  }
  catch ( error const& e )
  {
    throw usage_error( e.what() );
  }
  if ( o.outputs && info( spec.block ).is_encoder )
    throw usage_error( "--outputs needs a multiplier block" );
  binary_model model;
  if ( o.outputs )
    model = [w = spec.width]( int64_t a, int64_t b ) { return ref_multiply( a, b, w ); };
  auto const h = value_histogram( stimulus, model );
  auto const csv = histogram_csv( o.outputs ? h.outputs : h.inputs );
  if ( o.output.empty() )
  {
    out << csv;
    return exit_success;
  }
  auto const path = resolve_output( o.output );
  ensure_writable( path, o.force );
  write_text( path, csv );
  return exit_success;
}

} // namespace

int run_cli( std::vector<std::string> const& args, std::ostream& out, std::ostream& err )
{
  CLI::App app{ "Logic synthesis and switching-activity workbench for number-format multipliers", "smpower" };
  app.require_subcommand( 1 );
  app.set_version_flag( "--version", std::string( version ) );

  generate_options gen;
  auto* generate = app.add_subcommand( "generate", "Write a generated block as a JSON netlist" );
  generate->add_option( "--block", gen.block, "Block name, e.g. mul-sm-tc" )->required();
  generate->add_option( "--width", gen.width, "Operand width" );
  generate->add_option( "-o,--output", gen.output, "Output path (default <block>.json)" );
  generate->add_flag( "--force", gen.force, "Overwrite an existing file" );

  verify_options ver;
  auto* verify = app.add_subcommand( "verify", "Check a netlist against the golden model on every legal input" );
  verify->add_option( "netlist", ver.netlist, "JSON netlist" )->required();
  verify->add_option( "--block", ver.block, "Block the netlist implements" )->required();
  verify->add_option( "--width", ver.width, "Operand width" );

  measure_options mea;
  auto* measure_cmd = app.add_subcommand( "measure", "Print transistor count, depth and switching activity" );
  measure_cmd->add_option( "netlist", mea.netlist, "JSON netlist" )->required();
  measure_cmd->add_option( "--block", mea.block, "Block (defines the stimulus for switching activity)" );
  measure_cmd->add_option( "--width", mea.width, "Operand width" );
  measure_cmd->add_option( "--sigma", mea.sigma, "Standard deviation of the operand distribution" );
  measure_cmd->add_option( "--cycles", mea.cycles, "Simulated cycles" );
  measure_cmd->add_option( "--seed", mea.seed, "Stimulus seed" );
  measure_cmd->add_option( "--toggles", mea.toggles, "Write the per-wire toggle table to this CSV" );
  measure_cmd->add_flag( "--force", mea.force, "Overwrite existing files" );

  optimize_options opt;
  auto* optimize_cmd = app.add_subcommand( "optimize", "Random-walk rewrite search" );
  optimize_cmd->add_option( "netlist", opt.netlist, "Start netlist" )->required();
  optimize_cmd->add_option( "--block", opt.block, "Block the netlist implements" )->required();
  optimize_cmd->add_option( "--width", opt.width, "Operand width" );
  optimize_cmd->add_option( "--runs", opt.runs, "Independent runs" );
  optimize_cmd->add_option( "--iterations", opt.iterations, "Iterations per run" );
  optimize_cmd->add_option( "--chain", opt.chain, "Steps per chain" );
  optimize_cmd->add_option( "--parallel", opt.parallel, "Chains per iteration" );
  optimize_cmd->add_option( "--select", opt.select, "Per-iteration metric: transistors, swact or both" );
  optimize_cmd->add_option( "--final-select", opt.final_select, "Metric across runs: transistors or swact" );
  optimize_cmd->add_option( "--sigma", opt.sigma, "Standard deviation of the operand distribution" );
  optimize_cmd->add_option( "--cycles", opt.cycles, "Cycles for the final ranking" );
  optimize_cmd->add_option( "--search-cycles", opt.search_cycles, "Cycles for switching activity during the search" );
  optimize_cmd->add_option( "--seed", opt.seed, "Master seed (also the stimulus seed)" );
  optimize_cmd->add_option( "--scatter-every", opt.scatter_every, "Annotate every k-th step with switching activity" );
  optimize_cmd->add_option( "--threads", opt.threads, "Worker threads (0 = all cores)" );
  optimize_cmd->add_option( "-o,--output", opt.output, "Winner netlist (default <block>.opt.json)" );
  optimize_cmd->add_option( "--trace", opt.trace, "Trace CSV" );
  optimize_cmd->add_option( "--scatter", opt.scatter, "Scatter CSV of annotated steps" );
  optimize_cmd->add_option( "--summary", opt.summary, "Summary JSON" );
  optimize_cmd->add_flag( "--manifest", opt.manifest, "Embed version, seeds and cost table hash" );
  optimize_cmd->add_flag( "--force", opt.force, "Overwrite existing files" );

  report_cli_options rep;
  auto* report = app.add_subcommand( "report", "Switching activity and area tables of configurations A to E" );
  report->add_option( "--configs", rep.configs, "Comma-separated configurations" );
  report->add_option( "--sigmas", rep.sigmas, "Comma-separated sigmas" );
  report->add_option( "--width", rep.width, "Operand width" );
  report->add_option( "--cycles", rep.cycles, "Simulated cycles" );
  report->add_option( "--seed", rep.seed, "Stimulus seed" );
  report->add_option( "--netlist-dir", rep.netlist_dir, "Use <block>.json from this directory where present" );
  report->add_flag( "--equivalence-check", rep.equivalence_check, "Check that configuration B equals A first" );
  report->add_option( "--swact-out", rep.swact_out, "Write the switching activity table to this CSV" );
  report->add_option( "--area-out", rep.area_out, "Write the area table to this CSV" );
  report->add_flag( "--manifest", rep.manifest, "Embed version, seeds and cost table hash" );
  report->add_flag( "--force", rep.force, "Overwrite existing files" );

  histogram_options his;
  auto* histogram = app.add_subcommand( "histogram", "Histogram of sampled operands or exact products" );
  histogram->add_option( "--block", his.block, "Block (defines range and encoding)" );
  histogram->add_option( "--width", his.width, "Operand width" );
  histogram->add_option( "--sigma", his.sigma, "Standard deviation" );
  histogram->add_option( "--cycles", his.cycles, "Samples per operand" );
  histogram->add_option( "--seed", his.seed, "Stimulus seed" );
  histogram->add_flag( "--outputs", his.outputs, "Histogram of exact products instead of operands" );
  histogram->add_option( "-o,--output", his.output, "Output CSV (default stdout)" );
  histogram->add_flag( "--force", his.force, "Overwrite an existing file" );

  try
  {
    std::vector<std::string> reversed( args.rbegin(), args.rend() );
    app.parse( reversed );
  }
  catch ( CLI::ParseError const& e )
  {
    auto const code = app.exit( e, out, err );
    return code == 0 ? exit_success : exit_usage;
  }

  try
  {
    if ( generate->parsed() )
      return cmd_generate( gen, out );
    if ( verify->parsed() )
      return cmd_verify( ver, out );
    if ( measure_cmd->parsed() )
      return cmd_measure( mea, out );
    if ( optimize_cmd->parsed() )
      return cmd_optimize( opt, out, err );
    if ( report->parsed() )
      return cmd_report( rep, out );
    if ( histogram->parsed() )
      return cmd_histogram( his, out );
  }
  catch ( usage_error const& e )
  {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  }
  catch ( check_failure const& e )
  {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  catch ( std::exception const& e )
  {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }
  return exit_usage;
}

} // namespace smpower
