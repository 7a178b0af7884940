#include <doctest.h>

#include <cstdlib>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include <smpower/cli.hpp>
#include <smpower/netlist_io.hpp>

using namespace smpower;
namespace fs = std::filesystem;

namespace
{

struct cli_result
{
  int code;
  std::string out;
  std::string err;
};

cli_result run( std::vector<std::string> const& args )
{
  std::ostringstream out, err;
  auto const code = run_cli( args, out, err );
  return { code, out.str(), err.str() };
}

std::string slurp( fs::path const& p )
{
  std::ifstream is( p, std::ios::binary );
  return { std::istreambuf_iterator<char>( is ), std::istreambuf_iterator<char>() };
}

/* a fresh directory per test case, removed afterwards */
class scratch_dir
{
public:
  explicit scratch_dir( std::string const& name )
      : path_( fs::temp_directory_path() / ( "smpower_cli_" + name + "_" + std::to_string( ::getpid() ) ) )
  {
    fs::remove_all( path_ );
    fs::create_directories( path_ );
    unsetenv( "SMPOWER_OUT_DIR" );
  }
  ~scratch_dir() { fs::remove_all( path_ ); }

  std::string operator/( std::string const& file ) const { return ( path_ / file ).string(); }
  fs::path const& path() const { return path_; }

private:
  fs::path path_;
};

} // namespace

TEST_CASE( "usage" )
{
  CHECK( run( {} ).code == exit_usage );
  CHECK( run( { "--help" } ).code == exit_success );
  CHECK( run( { "frobnicate" } ).code == exit_usage );
  auto const v = run( { "--version" } );
  CHECK( v.code == exit_success );
  CHECK( v.out.find( std::string( version ) ) != std::string::npos );
}

TEST_CASE( "generate" )
{
  scratch_dir dir( "generate" );
  auto const e = run( { "generate", "--block", "mul-sm-sm", "--width", "4", "-o", dir / "e.json" } );
  CHECK( e.code == exit_success );
  auto const n = read_netlist_file( dir / "e.json" );
  CHECK( n.inputs().size() == 8u );
  CHECK( n.outputs().size() == 8u );

  CHECK( run( { "generate", "--block", "mul-sm-sm", "-o", dir / "e.json" } ).code == exit_usage );
  CHECK( run( { "generate", "--block", "mul-sm-sm", "-o", dir / "e.json", "--force" } ).code == exit_success );

  CHECK( run( { "generate", "--block", "enc-tc-sm", "-o", dir / "enc.json" } ).code == exit_success );
  auto const enc = read_netlist_file( dir / "enc.json" );
  CHECK( enc.inputs().size() == 4u );
  CHECK( enc.outputs().size() == 4u );

  auto const bad = run( { "generate", "--block", "mul-xx-yy", "-o", dir / "x.json" } );
  CHECK( bad.code == exit_usage );
  CHECK( bad.err.find( "unknown block" ) != std::string::npos );
  CHECK_FALSE( fs::exists( dir / "x.json" ) );
  CHECK( run( { "generate", "--block", "mul-sm-sm", "--width", "1", "-o", dir / "w.json" } ).code == exit_usage );
}

TEST_CASE( "output directory from the environment" )
{
  scratch_dir dir( "env" );
  setenv( "SMPOWER_OUT_DIR", dir.path().c_str(), 1 );
  CHECK( run( { "generate", "--block", "enc-tc-sme" } ).code == exit_success );
  CHECK( fs::exists( dir / "enc-tc-sme.json" ) );
  CHECK( run( { "generate", "--block", "enc-tc-sme", "-o", "sub/x.json" } ).code == exit_success );
  CHECK( fs::exists( dir / "sub/x.json" ) );
  unsetenv( "SMPOWER_OUT_DIR" );
}

TEST_CASE( "verify" )
{
  scratch_dir dir( "verify" );
  REQUIRE( run( { "generate", "--block", "mul-sm-tc", "-o", dir / "c.json" } ).code == exit_success );

  auto const ok = run( { "verify", dir / "c.json", "--block", "mul-sm-tc" } );
  CHECK( ok.code == exit_success );
  CHECK( ok.out.find( "225/225 pass" ) != std::string::npos );

  /* corrupt one AND2 into an OR2 */
  auto doc = nlohmann::json::parse( slurp( dir / "c.json" ) );
  for ( auto& c : doc["cells"] )
  {
    if ( c["kind"] == "AND2" )
    {
      c["kind"] = "OR2";
      break;
    }
  }
  std::ofstream( dir / "bad.json" ) << doc.dump();
  auto const bad = run( { "verify", dir / "bad.json", "--block", "mul-sm-tc" } );
  CHECK( bad.code == exit_failure );
  CHECK( bad.out.find( "counterexample" ) != std::string::npos );

  CHECK( run( { "verify", dir / "c.json", "--block", "mul-sm-tc", "--width", "3" } ).code == exit_usage );
  CHECK( run( { "verify", dir / "c.json", "--block", "enc-tc-sm" } ).code == exit_usage );
  CHECK( run( { "verify", dir / "missing.json", "--block", "mul-sm-tc" } ).code == exit_usage );
}

TEST_CASE( "measure" )
{
  scratch_dir dir( "measure" );
  REQUIRE( run( { "generate", "--block", "enc-tc-sm", "-o", dir / "enc.json" } ).code == exit_success );
  auto const plain = run( { "measure", dir / "enc.json" } );
  CHECK( plain.code == exit_success );
  CHECK( plain.out.find( "transistors," ) != std::string::npos );
  CHECK( plain.out.find( "swact" ) == std::string::npos );

  auto const full = run( { "measure", dir / "enc.json", "--block", "enc-tc-sm", "--sigma", "2", "--cycles", "500", "--toggles", dir / "t.csv" } );
  CHECK( full.code == exit_success );
  CHECK( full.out.find( "swact," ) != std::string::npos );
  CHECK( slurp( dir / "t.csv" ).starts_with( "wire,toggles,fanout_cost,weighted\n" ) );
}

TEST_CASE( "optimize" )
{
  scratch_dir dir( "optimize" );
  REQUIRE( run( { "generate", "--block", "mul-sm-sm", "-o", dir / "e.json" } ).code == exit_success );
  auto optimize = [&]( std::string const& tag ) {
    return run( { "optimize", dir / "e.json", "--block", "mul-sm-sm", "--runs", "2", "--iterations", "2", "--chain", "4", "--select",
                  "transistors", "--final-select", "swact", "--sigma", "3", "--cycles", "1000", "--search-cycles", "300", "--seed", "1",
                  "--scatter-every", "2", "-o", dir / ( tag + ".json" ), "--trace", dir / ( tag + ".csv" ), "--scatter",
                  dir / ( tag + ".scatter.csv" ), "--summary", dir / ( tag + ".summary.json" ), "--manifest" } );
  };
  auto const first = optimize( "one" );
  REQUIRE( first.code == exit_success );
  auto const second = optimize( "two" );
  REQUIRE( second.code == exit_success );

  CHECK( slurp( dir / "one.json" ) == slurp( dir / "two.json" ) );
  CHECK( slurp( dir / "one.csv" ) == slurp( dir / "two.csv" ) );
  CHECK( slurp( dir / "one.scatter.csv" ) == slurp( dir / "two.scatter.csv" ) );

  auto const trace = slurp( dir / "one.csv" );
  REQUIRE( trace.starts_with( "# {" ) );
  auto const manifest = nlohmann::json::parse( trace.substr( 2, trace.find( '\n' ) - 2 ) );
  CHECK( manifest["version"] == std::string( version ) );
  CHECK( manifest.contains( "cost_table_hash" ) );
  CHECK( manifest["seeds"]["master"] == 1 );
  CHECK( trace.find( "\nrun,iteration,chain,step,recipe,applications,nodes,transistors,swact\n" ) != std::string::npos );

  auto const summary = nlohmann::json::parse( slurp( dir / "one.summary.json" ) );
  CHECK( summary["winner"]["transistors"].get<uint64_t>() <= summary["start"]["transistors"].get<uint64_t>() + 100u );
  CHECK( run( { "verify", dir / "one.json", "--block", "mul-sm-sm" } ).code == exit_success );

  /* existing outputs are kept */
  CHECK( optimize( "one" ).code == exit_usage );
  CHECK( run( { "optimize", dir / "e.json", "--block", "mul-sm-sm", "--select", "area", "-o", dir / "x.json" } ).code == exit_usage );
  CHECK( run( { "optimize", dir / "e.json", "--block", "mul-sm-sm", "--final-select", "both", "-o", dir / "x.json" } ).code == exit_usage );
  CHECK( run( { "optimize", dir / "e.json", "--block", "mul-sm-sm", "--chain", "0", "-o", dir / "x.json" } ).code == exit_usage );
  CHECK_FALSE( fs::exists( dir / "x.json" ) );
}

TEST_CASE( "optimize refuses a wrong start circuit" )
{
  scratch_dir dir( "optimize_bad" );
  REQUIRE( run( { "generate", "--block", "mul-sm-tc", "-o", dir / "c.json" } ).code == exit_success );
  auto const r = run( { "optimize", dir / "c.json", "--block", "mul-sm-sm", "--runs", "1", "--iterations", "1", "--chain", "1", "-o",
                        dir / "out.json", "--trace", dir / "out.csv" } );
  CHECK( r.code == exit_failure );
  CHECK_FALSE( fs::exists( dir / "out.json" ) );
  CHECK_FALSE( fs::exists( dir / "out.csv" ) );
}

TEST_CASE( "report" )
{
  scratch_dir dir( "report" );
  auto const r = run( { "report", "--configs", "A,B", "--sigmas", "3", "--cycles", "1000", "--equivalence-check" } );
  CHECK( r.code == exit_success );
  CHECK( r.out.find( "B == A" ) != std::string::npos );
  CHECK( r.out.find( "config,sigma,s_enc,s_mult,s_tot,delta_percent\nA,3.0,0.000," ) != std::string::npos );
  CHECK( r.out.find( "config,t_e,t_m,t_tot,t_delta_percent,d_e,d_m,d_tot,d_delta_percent\nA,0," ) != std::string::npos );

  CHECK( run( { "report", "--configs", "A,Q" } ).code == exit_usage );
  CHECK( run( { "report", "--sigmas", "2,x" } ).code == exit_usage );

  auto const files = run( { "report", "--sigmas", "2", "--cycles", "500", "--swact-out", dir / "s.csv", "--area-out", dir / "a.csv", "--manifest" } );
  CHECK( files.code == exit_success );
  CHECK( slurp( dir / "s.csv" ).starts_with( "# {" ) );
  CHECK( slurp( dir / "a.csv" ).find( "\nE,0," ) != std::string::npos );

  /* a netlist directory overrides individual blocks and is verified */
  REQUIRE( run( { "generate", "--block", "mul-sm-sm", "-o", dir / "blocks/mul-tc-tc.json" } ).code == exit_success );
  CHECK( run( { "report", "--netlist-dir", dir / "blocks", "--cycles", "500" } ).code == exit_failure );
}

TEST_CASE( "histogram" )
{
  scratch_dir dir( "histogram" );
  auto const r = run( { "histogram", "--sigma", "2", "--cycles", "2000", "--seed", "3" } );
  CHECK( r.code == exit_success );
  CHECK( r.out.starts_with( "value,count\n" ) );
  CHECK( r.out.find( "\n0," ) != std::string::npos );

  CHECK( run( { "histogram", "--block", "mul-sm-sm", "--outputs", "--cycles", "500", "-o", dir / "h.csv" } ).code == exit_success );
  CHECK( slurp( dir / "h.csv" ).starts_with( "value,count\n" ) );
  CHECK( run( { "histogram", "--block", "enc-tc-sm", "--outputs" } ).code == exit_usage );
  CHECK( run( { "histogram", "--sigma", "0" } ).code == exit_usage );
}
