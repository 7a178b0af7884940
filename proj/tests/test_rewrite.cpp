#include <doctest.h>

#include <random>

#include <smpower/aig.hpp>
#include <smpower/generators.hpp>
#include <smpower/mapping.hpp>
#include <smpower/resynthesis.hpp>
#include <smpower/rewrite.hpp>
#include <smpower/truth_table.hpp>

using namespace smpower;

namespace
{

constexpr std::array<block_kind, 4> multipliers = { block_kind::mul_tc_tc, block_kind::mul_sm_tc, block_kind::mul_sme_tc,
                                                    block_kind::mul_sm_sm };

/* compares an AIG against the cell-level evaluator on every input pattern */
bool matches_netlist( aig_network const& aig, cell_netlist const& n )
{
  if ( aig.num_pis() != n.inputs().size() || aig.num_pos() != n.outputs().size() )
    return false;
  for ( uint64_t p = 0; p < ( uint64_t{ 1 } << aig.num_pis() ); ++p )
  {
    if ( simulate_pattern( aig, p ) != evaluate( n, p ).outputs )
      return false;
  }
  return true;
}

uint64_t count_kind( cell_netlist const& n, cell_kind kind )
{
  return static_cast<uint64_t>( std::count_if( n.cells().begin(), n.cells().end(), [&]( cell const& c ) { return c.kind == kind; } ) );
}

aig_network random_aig( std::mt19937_64& rng, uint32_t pis, uint32_t gates, uint32_t pos )
{
  aig_network aig;
  std::vector<aig_signal> signals;
  for ( uint32_t i = 0; i < pis; ++i )
    signals.push_back( aig.create_pi( "x" + std::to_string( i ) ) );
  for ( uint32_t g = 0; g < gates; ++g )
  {
    auto pick = [&] { return complement_if( signals[rng() % signals.size()], rng() & 1u ); };
    signals.push_back( aig.create_and( pick(), pick() ) );
  }
  for ( uint32_t o = 0; o < pos; ++o )
    aig.create_po( complement_if( signals[signals.size() - 1u - o], rng() & 1u ), "y" + std::to_string( o ) );
  return aig.cleanup();
}

} // namespace

TEST_CASE( "AIG construction and hashing" )
{
  aig_network aig;
  auto const a = aig.create_pi( "a" );
  auto const b = aig.create_pi( "b" );
  CHECK( aig.create_and( a, b ) == aig.create_and( b, a ) );
  CHECK( aig.create_and( a, operator_not( a ) ) == aig_const0 );
  CHECK( aig.create_and( a, aig_const1 ) == a );
  CHECK( aig.create_and( a, a ) == a );
  CHECK( aig.num_gates() == 1u );
  CHECK( aig.find_and( b, a ).has_value() );
  CHECK_FALSE( aig.find_and( a, operator_not( b ) ).has_value() );
  CHECK_THROWS_AS( aig.create_pi( "late" ), error );

  aig.create_xor( a, b );
  CHECK( aig.num_gates() == 4u );
}

TEST_CASE( "AIG text dump" )
{
  aig_network aig;
  auto const a = aig.create_pi( "a" );
  auto const b = aig.create_pi( "b" );
  aig.create_po( operator_not( aig.create_and( a, operator_not( b ) ) ), "y" );
  CHECK( to_text( aig ) == "PI 1 a\nPI 2 b\n3 AND 1+ 2-\nOUT y 3-\n" );
}

TEST_CASE( "AIG cleanup and levels" )
{
  aig_network aig;
  auto const a = aig.create_pi( "a" );
  auto const b = aig.create_pi( "b" );
  auto const c = aig.create_pi( "c" );
  aig.create_and( b, c ); /* dangling */
  auto const ab = aig.create_and( a, b );
  aig.create_po( aig.create_and( ab, c ), "y" );
  CHECK( aig.depth() == 2u );
  auto const clean = aig.cleanup();
  CHECK( clean.num_gates() == 2u );
  CHECK( check_equivalence( aig, clean ) );
  CHECK( clean.cleanup() == clean );
}

TEST_CASE( "to_aig examples" )
{
  SUBCASE( "XOR2 becomes three AND nodes" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    auto const b = n.add_input( "b" );
    n.add_output( n.add_cell( cell_kind::xor2, { a, b }, "y" ) );
    auto const aig = to_aig( n );
    CHECK( aig.num_gates() == 3u );
    CHECK( matches_netlist( aig, n ) );
  }
  SUBCASE( "an inverter is a complemented output" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    n.add_output( n.add_cell( cell_kind::inv, { a }, "y" ) );
    auto const aig = to_aig( n );
    CHECK( aig.num_gates() == 0u );
    REQUIRE( aig.num_pos() == 1u );
    CHECK( aig.po_at( 0 ) == operator_not( make_signal( aig.pi_at( 0 ) ) ) );
    CHECK( aig.po_names()[0] == "y" );
  }
  SUBCASE( "every cell kind" )
  {
    cell_netlist n;
    auto const a = n.add_input( "a" );
    auto const b = n.add_input( "b" );
    auto const c = n.add_input( "c" );
    for ( auto kind : { cell_kind::buf, cell_kind::inv, cell_kind::nand2, cell_kind::nor2, cell_kind::and2, cell_kind::or2,
                        cell_kind::xor2, cell_kind::xnor2, cell_kind::mux2, cell_kind::maj3 } )
    {
      std::vector<wire_id> inputs{ a, b, c };
      inputs.resize( arity( kind ) );
      n.add_output( n.add_cell( kind, inputs ) );
    }
    CHECK( matches_netlist( to_aig( n ), n ) );
  }
  SUBCASE( "generated blocks" )
  {
    for ( auto b : all_blocks )
    {
      auto const n = build_block( { b, 4 } );
      CHECK( matches_netlist( to_aig( n ), n ) );
    }
  }
}

TEST_CASE( "from_aig examples" )
{
  SUBCASE( "three-node XOR maps to one XOR2" )
  {
    aig_network aig;
    auto const a = aig.create_pi( "a" );
    auto const b = aig.create_pi( "b" );
    aig.create_po( aig.create_xor( a, b ), "y" );
    auto const n = from_aig( aig );
    CHECK( n.cell_count() == 1u );
    CHECK( count_kind( n, cell_kind::xor2 ) == 1u );
    CHECK( transistor_count( n ) == 8u );
    CHECK( matches_netlist( aig, n ) );
  }
  SUBCASE( "shared AND with complemented output" )
  {
    aig_network aig;
    auto const a = aig.create_pi( "a" );
    auto const b = aig.create_pi( "b" );
    auto const c = aig.create_pi( "c" );
    auto const ab = aig.create_and( a, b );
    aig.create_po( ab, "x" );
    aig.create_po( operator_not( aig.create_and( ab, c ) ), "y" );
    auto const n = from_aig( aig );
    CHECK( count_kind( n, cell_kind::and2 ) == 1u );
    CHECK( count_kind( n, cell_kind::nand2 ) == 1u );
    CHECK( transistor_count( n ) == 10u );
    CHECK( matches_netlist( aig, n ) );
  }
  SUBCASE( "no AND nodes" )
  {
    aig_network aig;
    auto const a = aig.create_pi( "a" );
    aig.create_po( a, "same" );
    aig.create_po( operator_not( a ), "inverted" );
    aig.create_po( aig_const1, "one" );
    auto const n = from_aig( aig );
    for ( auto const& c : n.cells() )
      CHECK( ( c.kind == cell_kind::inv || c.kind == cell_kind::const0 || c.kind == cell_kind::const1 || c.kind == cell_kind::buf ) );
    CHECK( n.validate().empty() );
    CHECK( matches_netlist( aig, n ) );
  }
}

TEST_CASE( "mapping never exceeds the naive expansion" )
{
  std::mt19937_64 rng( 7 );
  for ( uint32_t trial = 0; trial < 60; ++trial )
  {
    auto const aig = random_aig( rng, 3u + trial % 6u, 5u + trial, 1u + trial % 3u );
    auto const mapped = from_aig( aig );
    auto const naive = naive_expansion( aig );
    CHECK( mapped.validate().empty() );
    CHECK( transistor_count( mapped ) <= transistor_count( naive ) );
    CHECK( matches_netlist( aig, mapped ) );
    CHECK( matches_netlist( aig, naive ) );
  }
  for ( auto b : all_blocks )
  {
    auto const aig = to_aig( build_block( { b, 4 } ) );
    CHECK( transistor_count( from_aig( aig ) ) <= transistor_count( naive_expansion( aig ) ) );
  }
}

TEST_CASE( "equivalence checking" )
{
  auto const a = to_aig( build_block( { block_kind::mul_sm_tc, 4 } ) );
  CHECK( check_equivalence( a, a ) );

  auto flipped = a;
  flipped.set_po( 3, operator_not( flipped.po_at( 3 ) ) );
  CHECK_FALSE( check_equivalence( a, flipped ) );

  auto const enc = to_aig( build_block( { block_kind::enc_tc_sm, 4 } ) );
  CHECK_THROWS_AS( check_equivalence( a, enc ), error );

  aig_network wide;
  for ( uint32_t i = 0; i < 21u; ++i )
    wide.create_pi();
  wide.create_po( aig_const0 );
  CHECK_THROWS_AS( check_equivalence( wide, wide ), unsupported_error );

  aig_network twenty;
  std::vector<aig_signal> inputs;
  for ( uint32_t i = 0; i < 20u; ++i )
    inputs.push_back( twenty.create_pi() );
  aig_signal acc = aig_const1;
  for ( auto x : inputs )
    acc = twenty.create_and( acc, x );
  twenty.create_po( acc );
  CHECK( check_equivalence( twenty, balance( twenty ) ) );
}

TEST_CASE( "resynthesis reproduces its truth table" )
{
  std::mt19937_64 rng( 3 );
  for ( uint32_t vars = 0; vars <= 6u; ++vars )
  {
    for ( uint32_t trial = 0; trial < 40u; ++trial )
    {
      auto const tt = tt6::extend( rng(), vars );
      auto const& dag = synthesize( tt );
      CHECK( dag.simulate() == tt );
      CHECK( synthesize_random( tt, rng ).simulate() == tt );

      /* independent check through the AIG simulator */
      aig_network aig;
      std::vector<aig_signal> leaves;
      for ( uint32_t i = 0; i < 6u; ++i )
        leaves.push_back( aig.create_pi() );
      aig.create_po( instantiate( aig, dag, leaves ) );
      aig_simulation const sim( aig );
      CHECK( sim.signal( aig.po_at( 0 ) )[0] == tt );
    }
  }
  CHECK( synthesize( tt6::var( 2 ) ).num_gates() == 0u );
  CHECK( synthesize( tt6::var( 0 ) & tt6::var( 1 ) ).num_gates() == 1u );
  CHECK( synthesize( tt6::var( 0 ) ^ tt6::var( 1 ) ).num_gates() == 3u );
}

TEST_CASE( "recipe catalogue" )
{
  auto const recipes = recipe_catalogue();
  REQUIRE( recipes.size() == 30u );
  uint32_t compression = 0;
  for ( uint32_t i = 0; i < recipes.size(); ++i )
  {
    CHECK( recipes[i].id == i );
    CHECK_FALSE( recipes[i].name.empty() );
    compression += recipes[i].kind == recipe_class::compression ? 1u : 0u;
    CHECK( is_compression( i ) == ( recipes[i].kind == recipe_class::compression ) );
  }
  CHECK( compression == 10u );
  CHECK_THROWS_AS( recipe( 30 ), error );
}

TEST_CASE( "every recipe preserves function" )
{
  for ( auto b : multipliers )
  {
    auto const start = to_aig( build_block( { b, 4 } ) );
    for ( uint32_t id = 0; id < num_recipes; ++id )
    {
      auto current = start;
      for ( uint64_t seed = 0; seed < 4u; ++seed )
      {
        current = apply_recipe( current, id, seed );
        INFO( info( b ).name, " recipe ", recipe( id ).name, " seed ", seed );
        CHECK( check_equivalence( start, current ) );
        CHECK( current.pi_names() == start.pi_names() );
        CHECK( current.po_names() == start.po_names() );
      }
    }
  }
}

TEST_CASE( "recipes on random graphs" )
{
  std::mt19937_64 rng( 11 );
  for ( uint32_t trial = 0; trial < 10u; ++trial )
  {
    auto const aig = random_aig( rng, 4u + trial % 5u, 30u + 3u * trial, 1u + trial % 4u );
    for ( uint32_t id = 0; id < num_recipes; ++id )
    {
      INFO( "trial ", trial, " recipe ", recipe( id ).name );
      CHECK( check_equivalence( aig, apply_recipe( aig, id, trial ) ) );
    }
  }
}

TEST_CASE( "recipes are deterministic" )
{
  auto const start = to_aig( build_block( { block_kind::mul_sme_tc, 4 } ) );
  for ( uint32_t id = 0; id < num_recipes; ++id )
    CHECK( apply_recipe( start, id, 42 ) == apply_recipe( start, id, 42 ) );
}

TEST_CASE( "duplicated logic is compressed" )
{
  /* the same function built twice with different structure */
  aig_network aig;
  auto const a = aig.create_pi( "a" );
  auto const b = aig.create_pi( "b" );
  auto const c = aig.create_pi( "c" );
  auto const d = aig.create_pi( "d" );
  auto const first = aig.create_and( aig.create_and( a, b ), aig.create_and( c, d ) );
  auto const second = aig.create_and( aig.create_and( aig.create_and( d, c ), b ), a );
  aig.create_po( first, "x" );
  aig.create_po( aig.create_or( second, c ), "y" );
  REQUIRE( aig.num_gates() == 6u );

  CHECK( functional_reduction( aig ).num_gates() < aig.num_gates() );
  uint32_t best = aig.num_gates();
  for ( uint32_t id = 0; id < num_compression_recipes; ++id )
  {
    auto const r = apply_recipe( aig, id, 0 );
    CHECK( r.num_gates() <= aig.num_gates() );
    best = std::min( best, r.num_gates() );
  }
  /* y reduces to c, leaving the three AND nodes of x */
  CHECK( best <= 4u );
}

TEST_CASE( "compression recovers from decompression" )
{
  for ( auto b : { block_kind::mul_sm_sm, block_kind::mul_tc_tc } )
  {
    auto const start = to_aig( build_block( { b, 4 } ) );
    auto compress = []( aig_network aig ) {
      for ( uint32_t round = 0; round < 3u; ++round )
        for ( uint32_t id : { 6u, 2u, 1u, 4u, 7u, 9u, 0u } )
          aig = apply_recipe( aig, id, round );
      return aig;
    };
    auto const baseline = compress( start ).num_gates();
    for ( uint32_t id = num_compression_recipes; id < num_recipes; ++id )
    {
      /* Shannon expansion creates cofactor copies with different functions, which local rewriting does not merge */
      if ( recipe( id ).name.starts_with( "shannon" ) )
        continue;
      for ( uint64_t seed = 0; seed < 3u; ++seed )
      {
        auto const expanded = apply_recipe( start, id, seed );
        auto const recovered = compress( expanded ).num_gates();
        INFO( info( b ).name, " ", recipe( id ).name, ": ", expanded.num_gates(), " -> ", recovered, " (baseline ", baseline, ")" );
        CHECK( recovered * 10u <= baseline * 11u );
        CHECK( recovered * 10u >= baseline * 9u );
      }
    }
  }
}

TEST_CASE( "global transformations" )
{
  for ( auto b : multipliers )
  {
    auto const start = to_aig( build_block( { b, 4 } ) );
    auto const balanced = balance( start );
    CHECK( check_equivalence( start, balanced ) );
    CHECK( balanced.depth() <= start.depth() );
    CHECK( strash( start ).num_gates() <= start.num_gates() );
    CHECK( functional_reduction( start ).num_gates() <= start.num_gates() );
  }
}
