#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include <smpower/generators.hpp>
#include <smpower/netlist.hpp>
#include <smpower/netlist_io.hpp>

using namespace smpower;

namespace
{

/* a random valid netlist; cells are appended in topological order */
cell_netlist random_netlist( std::mt19937_64& rng, uint32_t num_inputs, uint32_t num_cells )
{
  static constexpr std::array<cell_kind, 10> kinds{ cell_kind::buf,  cell_kind::inv,   cell_kind::and2, cell_kind::nand2,
                                                    cell_kind::or2,  cell_kind::nor2,  cell_kind::xor2, cell_kind::xnor2,
                                                    cell_kind::mux2, cell_kind::maj3 };
  cell_netlist n( "random" );
  std::vector<wire_id> wires;
  for ( uint32_t i = 0; i < num_inputs; ++i )
    wires.push_back( n.add_input( "i" + std::to_string( i ) ) );
  for ( uint32_t c = 0; c < num_cells; ++c )
  {
    auto const kind = kinds[rng() % kinds.size()];
    std::vector<wire_id> ins;
    for ( uint32_t k = 0; k < arity( kind ); ++k )
      ins.push_back( wires[rng() % wires.size()] );
    wires.push_back( n.add_cell( kind, ins ) );
  }
  for ( uint32_t o = 0; o < 3u; ++o )
    n.add_output( wires[wires.size() - 1u - o] );
  return n;
}

/* independent recursive evaluator over wire drivers */
bool recursive_value( cell_netlist const& n, wire_id w, uint64_t pattern )
{
  for ( size_t i = 0; i < n.inputs().size(); ++i )
  {
    if ( n.inputs()[i] == w )
      return ( pattern >> i ) & 1u;
  }
  for ( auto const& c : n.cells() )
  {
    if ( c.output != w )
      continue;
    std::vector<bool> v;
    for ( auto in : c.inputs )
      v.push_back( recursive_value( n, in, pattern ) );
    switch ( c.kind )
    {
    case cell_kind::const0:
      return false;
    case cell_kind::const1:
      return true;
    case cell_kind::buf:
      return v[0];
    case cell_kind::inv:
      return !v[0];
    case cell_kind::and2:
      return v[0] && v[1];
    case cell_kind::nand2:
      return !( v[0] && v[1] );
    case cell_kind::or2:
      return v[0] || v[1];
    case cell_kind::nor2:
      return !( v[0] || v[1] );
    case cell_kind::xor2:
      return v[0] != v[1];
    case cell_kind::xnor2:
      return v[0] == v[1];
    case cell_kind::mux2:
      return v[2] ? v[1] : v[0];
    case cell_kind::maj3:
      return ( v[0] + v[1] + v[2] ) >= 2;
    }
  }
  throw std::logic_error( "undriven wire" );
}

} // namespace

TEST_CASE( "cost table" )
{
  CHECK( transistor_cost( cell_kind::const0 ) == 0u );
  CHECK( transistor_cost( cell_kind::const1 ) == 0u );
  CHECK( transistor_cost( cell_kind::inv ) == 2u );
  CHECK( transistor_cost( cell_kind::buf ) == 4u );
  CHECK( transistor_cost( cell_kind::nand2 ) == 4u );
  CHECK( transistor_cost( cell_kind::nor2 ) == 4u );
  CHECK( transistor_cost( cell_kind::and2 ) == 6u );
  CHECK( transistor_cost( cell_kind::or2 ) == 6u );
  CHECK( transistor_cost( cell_kind::xor2 ) == 8u );
  CHECK( transistor_cost( cell_kind::xnor2 ) == 8u );
  CHECK( transistor_cost( cell_kind::mux2 ) == 12u );
  CHECK( transistor_cost( cell_kind::maj3 ) == 10u );
  CHECK( arity( cell_kind::mux2 ) == 3u );
  CHECK( arity( cell_kind::maj3 ) == 3u );
  CHECK( arity( cell_kind::const1 ) == 0u );
  for ( uint32_t k = 0; k < num_cell_kinds; ++k )
  {
    auto const kind = static_cast<cell_kind>( k );
    CHECK( cell_kind_from_string( to_string( kind ) ) == kind );
  }
  CHECK_FALSE( cell_kind_from_string( "AOI21" ) );
}

TEST_CASE( "transistor count and depth" )
{
  SUBCASE( "pass-through" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    n.add_output( a );
    CHECK( transistor_count( n ) == 0u );
    CHECK( depth( n ) == 0u );
  }
  SUBCASE( "single XOR2" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    auto const b = n.add_input( "b" );
    n.add_output( n.add_cell( cell_kind::xor2, { a, b } ) );
    CHECK( transistor_count( n ) == 8u );
    CHECK( depth( n ) == 1u );
  }
  SUBCASE( "NOT feeding NAND2" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    auto const b = n.add_input( "b" );
    auto const na = n.add_cell( cell_kind::inv, { a } );
    n.add_output( n.add_cell( cell_kind::nand2, { na, b } ) );
    CHECK( transistor_count( n ) == 6u );
    CHECK( depth( n ) == 2u );
  }
  SUBCASE( "balanced XOR tree" )
  {
    cell_netlist n;
    std::vector<wire_id> in;
    for ( int i = 0; i < 4; ++i )
      in.push_back( n.add_input( "x" + std::to_string( i ) ) );
    auto const l = n.add_cell( cell_kind::xor2, { in[0], in[1] } );
    auto const r = n.add_cell( cell_kind::xor2, { in[2], in[3] } );
    n.add_output( n.add_cell( cell_kind::xor2, { l, r } ) );
    CHECK( depth( n ) == 2u );
    CHECK( measure( n ).cell_count == 3u );
  }
}

TEST_CASE( "evaluation" )
{
  cell_netlist n;
  auto const a = n.add_input( "a" );
  auto const b = n.add_input( "b" );
  auto const s = n.add_input( "s" );
  n.add_output( n.add_cell( cell_kind::xor2, { a, b } ) );
  n.add_output( n.add_cell( cell_kind::mux2, { a, b, s } ) );

  auto const r = evaluate( n, 0b011u ); /* a=1 b=1 s=0 */
  CHECK( r.outputs[0] == false );
  auto const m = evaluate( n, 0b110u ); /* a=0 b=1 s=1 */
  CHECK( m.outputs[1] == true );
  CHECK( m.wire_values.size() == n.num_wires() );

  bool const too_few[] = { true };
  CHECK_THROWS_AS( evaluate( n, std::span<bool const>( too_few, 1 ) ), error );

  auto const mul = build_multiplier( { block_kind::mul_tc_tc, 4 } );
  uint64_t const pattern = encode( -8, format::tc, 4 ).bits() | ( encode( 3, format::tc, 4 ).bits() << 4 );
  auto const out = evaluate( mul, pattern );
  CHECK( decode( out.output_word(), format::tc ) == ref_multiply( -8, 3, 4 ) );
}

TEST_CASE( "evaluation matches a recursive evaluator on random netlists" )
{
  std::mt19937_64 rng( 7 );
  for ( int trial = 0; trial < 30; ++trial )
  {
    auto const n = random_netlist( rng, 5, 12 );
    REQUIRE( n.validate().empty() );
    for ( uint64_t p = 0; p < 32u; ++p )
    {
      auto const r = evaluate( n, p );
      for ( size_t o = 0; o < n.outputs().size(); ++o )
        CHECK( r.outputs[o] == recursive_value( n, n.outputs()[o], p ) );
    }
  }
}

TEST_CASE( "metrics are invariant under cell reordering" )
{
  std::mt19937_64 rng( 11 );
  for ( int trial = 0; trial < 20; ++trial )
  {
    auto const n = random_netlist( rng, 4, 15 );
    auto order = n.topological_order();
    std::shuffle( order.begin(), order.end(), rng );

    cell_netlist rebuilt( "rebuilt" );
    for ( auto w : n.inputs() )
      rebuilt.add_input( n.wire_name( w ) );
    for ( wire_id w = 0; w < n.num_wires(); ++w )
    {
      if ( !rebuilt.find_wire( n.wire_name( w ) ) )
        rebuilt.add_wire( n.wire_name( w ) );
    }
    for ( auto c : order )
    {
      auto const& cl = n.cells()[c];
      std::vector<wire_id> ins;
      for ( auto w : cl.inputs )
        ins.push_back( *rebuilt.find_wire( n.wire_name( w ) ) );
      rebuilt.add_cell_raw( cl.kind, ins, *rebuilt.find_wire( n.wire_name( cl.output ) ) );
    }
    for ( auto w : n.outputs() )
      rebuilt.add_output( *rebuilt.find_wire( n.wire_name( w ) ) );

    REQUIRE( rebuilt.validate().empty() );
    CHECK( transistor_count( rebuilt ) == transistor_count( n ) );
    CHECK( depth( rebuilt ) == depth( n ) );
    CHECK( depth( n ) <= n.cell_count() );
  }
}

TEST_CASE( "fan-out cost" )
{
  cell_netlist n;
  auto const a = n.add_input( "a" );
  auto const b = n.add_input( "b" );
  auto const c = n.add_input( "c" );
  auto const y1 = n.add_cell( cell_kind::nand2, { a, b } );
  auto const y2 = n.add_cell( cell_kind::nand2, { a, c } );
  auto const y3 = n.add_cell( cell_kind::inv, { b } );
  auto const y4 = n.add_cell( cell_kind::xor2, { b, y1 } );
  n.add_output( y2 );
  n.add_output( y3 );
  n.add_output( y4 );

  CHECK( fanout_cost( n, a ) == 8u );  /* two NAND2 */
  CHECK( fanout_cost( n, b ) == 14u ); /* NAND2 + NOT + XOR2 */
  CHECK( fanout_cost( n, y2 ) == 0u ); /* output port without readers */
  CHECK( fanout_cost( n, "a" ) == 8u );
  CHECK_THROWS_AS( fanout_cost( n, wire_id{ 99 } ), error );
  CHECK_THROWS_AS( fanout_cost( n, "nope" ), error );

  cell_netlist m;
  auto const x = m.add_input( "x" );
  auto const y = m.add_input( "y" );
  m.add_output( m.add_cell( cell_kind::inv, { x } ) );
  m.add_output( m.add_cell( cell_kind::xor2, { x, y } ) );
  CHECK( fanout_cost( m, x ) == 10u );

  auto const costs = fanout_costs( n );
  for ( wire_id w = 0; w < n.num_wires(); ++w )
    CHECK( costs[w] == fanout_cost( n, w ) );
  for ( auto w : n.outputs() )
    CHECK( costs[w] == 0u );
}

TEST_CASE( "validation" )
{
  SUBCASE( "generated multiplier is valid" )
  {
    CHECK( build_multiplier( { block_kind::mul_sm_tc, 4 } ).validate().empty() );
  }
  SUBCASE( "combinational loop" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    auto const x = n.add_wire( "x" );
    auto const y = n.add_wire( "y" );
    n.add_cell_raw( cell_kind::and2, { a, y }, x );
    n.add_cell_raw( cell_kind::inv, { x }, y );
    n.add_output( y );
    auto const issues = n.validate();
    REQUIRE( issues.size() == 1u );
    CHECK( issues[0].kind == "cycle" );
    CHECK_THROWS_AS( n.topological_order(), error );
  }
  SUBCASE( "wrong arity" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    auto const x = n.add_wire( "x" );
    n.add_cell_raw( cell_kind::and2, { a }, x );
    n.add_output( x );
    auto const issues = n.validate();
    REQUIRE( !issues.empty() );
    CHECK( issues[0].kind == "arity" );
  }
  SUBCASE( "two drivers and an undriven output" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    auto const x = n.add_wire( "x" );
    auto const z = n.add_wire( "z" );
    n.add_cell_raw( cell_kind::inv, { a }, x );
    n.add_cell_raw( cell_kind::buf, { a }, x );
    n.add_output( x );
    n.add_output( z );
    auto const issues = n.validate();
    auto has = [&]( std::string const& kind ) {
      return std::any_of( issues.begin(), issues.end(), [&]( auto const& i ) { return i.kind == kind; } );
    };
    CHECK( has( "driver" ) );
    CHECK( has( "undriven-output" ) );
  }
}

TEST_CASE( "JSON interchange" )
{
  auto const n = build_multiplier( { block_kind::mul_sme_tc, 4 } );
  auto const text = write_netlist_string( n );
  auto const back = read_netlist_string( text );
  CHECK( write_netlist_string( back ) == text );
  CHECK( back.inputs().size() == 8u );
  CHECK( back.outputs().size() == 8u );
  CHECK( transistor_count( back ) == transistor_count( n ) );
  CHECK( verify_exhaustive( back, { block_kind::mul_sme_tc, 4 } ).ok() );

  auto const doc = nlohmann::json::parse( text );
  CHECK( doc.at( "inputs" ).at( 0 ) == "a[0]" );
  CHECK( doc.at( "outputs" ).size() == 8u );

  CHECK_THROWS_AS( read_netlist_string( "{ not json" ), error );
  CHECK_THROWS_AS( read_netlist_string( R"({"inputs":["a"],"outputs":["y"],"cells":[{"kind":"AOI21","inputs":["a"],"output":"y"}]})" ),
                   error );
  CHECK_THROWS_AS( read_netlist_string( R"({"inputs":["a"]})" ), error );
}
