#include <doctest.h>

#include <smpower/generators.hpp>

using namespace smpower;

namespace
{

uint64_t pack( int64_t a, int64_t b, format f, uint32_t w )
{
  return encode( a, f, w ).bits() | ( encode( b, f, w ).bits() << w );
}

int64_t wire_bus_value( cell_netlist const& n, evaluation_result const& r, std::string const& prefix, uint32_t width )
{
  int64_t value = 0;
  for ( uint32_t i = 0; i < width; ++i )
  {
    auto const w = n.find_wire( prefix + "[" + std::to_string( i ) + "]" );
    if ( w && r.wire_values[*w] )
      value |= int64_t{ 1 } << i;
  }
  return value;
}

/* flips output port `index` by inserting an inverter */
cell_netlist invert_output( cell_netlist const& n, size_t index )
{
  cell_netlist m = n;
  auto const flipped = m.add_cell( cell_kind::inv, { n.outputs()[index] }, "flipped" );
  cell_netlist result( n.name() );
  for ( auto w : m.inputs() )
    result.add_input( m.wire_name( w ) );
  for ( wire_id w = 0; w < m.num_wires(); ++w )
  {
    if ( !result.find_wire( m.wire_name( w ) ) )
      result.add_wire( m.wire_name( w ) );
  }
  for ( auto const& c : m.cells() )
  {
    std::vector<wire_id> ins;
    for ( auto w : c.inputs )
      ins.push_back( *result.find_wire( m.wire_name( w ) ) );
    result.add_cell_raw( c.kind, ins, *result.find_wire( m.wire_name( c.output ) ) );
  }
  for ( size_t o = 0; o < m.outputs().size(); ++o )
    result.add_output( *result.find_wire( m.wire_name( o == index ? flipped : m.outputs()[o] ) ) );
  return result;
}

} // namespace

TEST_CASE( "block catalogue" )
{
  CHECK( block_from_string( "mul-sm-sm" ) == block_kind::mul_sm_sm );
  CHECK( block_from_string( "enc-tc-sm" ) == block_kind::enc_tc_sm );
  CHECK_FALSE( block_from_string( "mul-xx" ) );
  for ( auto b : all_blocks )
    CHECK( block_from_string( info( b ).name ) == b );
  CHECK( operand_range( { block_kind::mul_sm_tc, 4 } ) == value_range{ -7, 7 } );
  CHECK( operand_range( { block_kind::mul_sme_tc, 4 } ) == value_range{ -8, 7 } );
}

TEST_CASE( "every generated block is exhaustively correct" )
{
  for ( uint32_t w : { 2u, 3u, 4u, 5u } )
  {
    for ( auto b : all_blocks )
    {
      CAPTURE( w );
      CAPTURE( info( b ).name );
      block_spec const spec{ b, w };
      auto const n = build_block( spec );
      REQUIRE( n.validate().empty() );
      CHECK( n.inputs().size() == num_input_bits( spec ) );
      CHECK( n.outputs().size() == num_output_bits( spec ) );
      auto const result = verify_exhaustive( n, spec );
      INFO( ( result.failure ? result.failure->describe() : std::string() ) );
      CHECK( result.ok() );
      CHECK( result.passed == result.checked );
    }
  }
}

TEST_CASE( "legal input counts at width 4" )
{
  auto checked = []( block_kind b ) { return verify_exhaustive( build_block( { b, 4 } ), { b, 4 } ).checked; };
  CHECK( checked( block_kind::mul_tc_tc ) == 256u );
  CHECK( checked( block_kind::mul_sme_tc ) == 256u );
  CHECK( checked( block_kind::mul_sm_tc ) == 225u ); /* SM pattern 1000 is never applied */
  CHECK( checked( block_kind::mul_sm_sm ) == 225u );
  CHECK( checked( block_kind::enc_tc_sm ) == 16u );
  CHECK( checked( block_kind::enc_tc_sme ) == 16u );
  CHECK( checked( block_kind::enc_tcs_sm ) == 15u );
}

TEST_CASE( "encoder examples" )
{
  auto const tc_sm = build_encoder( { block_kind::enc_tc_sm, 4 } );
  CHECK( evaluate( tc_sm, 0b1000u ).output_word().to_string() == "1111" );

  auto const tc_sme3 = build_encoder( { block_kind::enc_tc_sme, 3 } );
  CHECK( evaluate( tc_sme3, encode( -4, format::tc, 3 ).bits() ).output_word().to_string() == "100" );

  for ( auto b : { block_kind::enc_tc_sm, block_kind::enc_tc_sme, block_kind::enc_tcs_sm } )
    CHECK( evaluate( build_encoder( { b, 4 } ), 0u ).output_word().bits() == 0u );

  /* TCS->SM and TC->SME share one structure */
  auto const tcs_sm = build_encoder( { block_kind::enc_tcs_sm, 4 } );
  auto const tc_sme = build_encoder( { block_kind::enc_tc_sme, 4 } );
  CHECK( measure( tcs_sm ).transistors == measure( tc_sme ).transistors );
  CHECK( measure( tcs_sm ).cell_count == measure( tc_sme ).cell_count );
  for ( uint64_t p = 0; p < 16u; ++p )
    CHECK( evaluate( tcs_sm, p ).output_word() == evaluate( tc_sme, p ).output_word() );
  CHECK( measure( tc_sm ).transistors > measure( tc_sme ).transistors );
}

TEST_CASE( "multiplier examples" )
{
  SUBCASE( "SME: substitute 4 and shift" )
  {
    auto const n = build_multiplier( { block_kind::mul_sme_tc, 4 } );
    auto const r = evaluate( n, pack( -8, 3, format::sme, 4 ) );
    CHECK( decode( r.output_word(), format::tc ) == -24 );
    CHECK( wire_bus_value( n, r, "prod", 6 ) == 0 );
    CHECK( wire_bus_value( n, r, "shifted", 7 ) == 24 );

    auto const both = evaluate( n, pack( -8, -8, format::sme, 4 ) );
    CHECK( decode( both.output_word(), format::tc ) == 64 );
    CHECK( wire_bus_value( n, both, "shifted", 7 ) == 64 );
  }
  SUBCASE( "TC: full range" )
  {
    auto const n = build_multiplier( { block_kind::mul_tc_tc, 4 } );
    CHECK( decode( evaluate( n, pack( -8, -8, format::tc, 4 ) ).output_word(), format::tc ) == 64 );
    CHECK( decode( evaluate( n, pack( 7, -8, format::tc, 4 ) ).output_word(), format::tc ) == -56 );
  }
  SUBCASE( "SM to SM" )
  {
    auto const n = build_multiplier( { block_kind::mul_sm_sm, 4 } );
    auto const out = evaluate( n, pack( -7, 7, format::sm, 4 ) ).output_word();
    CHECK( out == encode( -49, format::sm, 8 ) );
    /* never a negative zero */
    for ( int64_t a = -7; a <= 7; ++a )
    {
      for ( int64_t b = -7; b <= 7; ++b )
      {
        auto const word = evaluate( n, pack( a, b, format::sm, 4 ) ).output_word();
        CHECK( is_legal( word, format::sm ) );
        CHECK( decode( word, format::sm ) == a * b );
      }
    }
  }
  SUBCASE( "SM to TC: zero product" )
  {
    auto const n = build_multiplier( { block_kind::mul_sm_tc, 4 } );
    for ( int64_t x = -7; x <= 7; ++x )
    {
      CHECK( evaluate( n, pack( 0, x, format::sm, 4 ) ).output_word().bits() == 0u );
      CHECK( evaluate( n, pack( x, 0, format::sm, 4 ) ).output_word().bits() == 0u );
    }
  }
}

TEST_CASE( "sign-magnitude cores multiply magnitudes only" )
{
  for ( auto b : { block_kind::mul_sm_tc, block_kind::mul_sm_sm } )
  {
    auto const n = build_multiplier( { b, 4 } );
    auto const readers = n.readers();
    for ( auto const* sign : { "a[3]", "b[3]" } )
    {
      auto const w = *n.find_wire( sign );
      REQUIRE( readers[w].size() == 1u );
      CHECK( n.cells()[readers[w][0]].kind == cell_kind::xor2 );
    }
  }
  /* partial products of the SME core are formed from 3-bit magnitudes */
  auto const sme = build_multiplier( { block_kind::mul_sme_tc, 4 } );
  auto const readers = sme.readers();
  for ( auto const* sign : { "a[3]", "b[3]" } )
  {
    for ( auto c : readers[*sme.find_wire( sign )] )
      CHECK( sme.cells()[c].kind != cell_kind::nand2 );
  }
}

TEST_CASE( "mutation is caught at the first affected input" )
{
  block_spec const spec{ block_kind::mul_tc_tc, 4 };
  auto const n = build_multiplier( spec );
  auto const broken = invert_output( n, 0 );
  REQUIRE( broken.validate().empty() );
  auto const result = verify_exhaustive( broken, spec );
  REQUIRE_FALSE( result.ok() );
  CHECK( result.failure->input_pattern == 0u );
  CHECK( result.failure->expected.bits() == 0u );
  CHECK( result.failure->actual.bits() == 1u );
  CHECK( result.checked == 1u );
  CHECK( result.failure->describe().find( "expected 00000000" ) != std::string::npos );

  auto const broken_msb = invert_output( n, 7 );
  auto const r2 = verify_exhaustive( broken_msb, spec );
  REQUIRE_FALSE( r2.ok() );
  CHECK( r2.failure->input_pattern == 0u );
}

TEST_CASE( "port mismatch is an error" )
{
  auto const n = build_multiplier( { block_kind::mul_tc_tc, 4 } );
  CHECK_THROWS_AS( verify_exhaustive( n, { block_kind::mul_tc_tc, 3 } ), error );
  CHECK_THROWS_AS( verify_exhaustive( n, { block_kind::enc_tc_sm, 4 } ), error );
  CHECK_THROWS_AS( build_block( { block_kind::mul_tc_tc, 1 } ), invalid_width_error );
}

TEST_CASE( "width-8 blocks are structurally supported" )
{
  for ( auto b : { block_kind::mul_sme_tc, block_kind::mul_tc_tc } )
  {
    block_spec const spec{ b, 8 };
    auto const n = build_block( spec );
    CHECK( n.validate().empty() );
    auto const& bi = info( b );
    for ( auto [x, y] : { std::pair{ -128, 127 }, std::pair{ -128, -128 }, std::pair{ -3, 100 }, std::pair{ 0, -77 } } )
    {
      auto const out = evaluate( n, pack( x, y, bi.input_format, 8 ) ).output_word();
      CHECK( decode( out, format::tc ) == int64_t{ x } * y );
    }
  }
}
