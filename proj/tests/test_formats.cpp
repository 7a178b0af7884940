#include <doctest.h>

#include <array>
#include <map>
#include <set>

#include <smpower/formats.hpp>

using namespace smpower;

namespace
{

constexpr std::array<format, 4> all_formats{ format::tc, format::tcs, format::sm, format::sme };

/* the 3-bit reference table; "" marks values a format cannot represent */
struct table_row
{
  format f;
  std::array<char const*, 8> patterns; /* values -4 .. 3 */
  char const* illegal;
};

constexpr std::array<table_row, 4> three_bit_table{ {
    { format::tc, { "100", "101", "110", "111", "000", "001", "010", "011" }, "" },
    { format::tcs, { "", "101", "110", "111", "000", "001", "010", "011" }, "100" },
    { format::sm, { "", "111", "110", "101", "000", "001", "010", "011" }, "100" },
    { format::sme, { "100", "111", "110", "101", "000", "001", "010", "011" }, "" },
} };

} // namespace

TEST_CASE( "representable ranges" )
{
  CHECK( representable_range( format::tc, 3 ) == value_range{ -4, 3 } );
  CHECK( representable_range( format::sm, 3 ) == value_range{ -3, 3 } );
  CHECK( representable_range( format::sme, 4 ) == value_range{ -8, 7 } );
  CHECK( representable_range( format::tcs, 4 ) == value_range{ -7, 7 } );
  CHECK( representable_range( format::tc, 8 ) == value_range{ -128, 127 } );
  CHECK_THROWS_AS( representable_range( format::tc, 1 ), invalid_width_error );
  CHECK_THROWS_AS( representable_range( format::sm, 0 ), invalid_width_error );
}

TEST_CASE( "three-bit reference table" )
{
  for ( auto const& row : three_bit_table )
  {
    CAPTURE( to_string( row.f ) );
    for ( int64_t v = -4; v <= 3; ++v )
    {
      std::string const expected = row.patterns[v + 4];
      if ( expected.empty() )
      {
        CHECK_THROWS_AS( encode( v, row.f, 3 ), range_error );
        continue;
      }
      CHECK( encode( v, row.f, 3 ).to_string() == expected );
      CHECK( decode( bit_word::from_string( expected ), row.f ) == v );
    }
    if ( std::string( row.illegal ).size() )
    {
      CHECK_FALSE( is_legal( bit_word::from_string( row.illegal ), row.f ) );
      CHECK_THROWS_AS( decode( bit_word::from_string( row.illegal ), row.f ), illegal_encoding_error );
    }
  }
}

TEST_CASE( "encode and decode examples" )
{
  CHECK( encode( -3, format::tc, 3 ).to_string() == "101" );
  CHECK( encode( -3, format::sm, 3 ).to_string() == "111" );
  CHECK( encode( -4, format::sme, 3 ).to_string() == "100" );
  for ( auto f : all_formats )
    CHECK( encode( 0, f, 3 ).to_string() == "000" );

  CHECK( decode( bit_word::from_string( "110" ), format::tc ) == -2 );
  CHECK( decode( bit_word::from_string( "011" ), format::sm ) == 3 );
  CHECK_THROWS_AS( decode( bit_word::from_string( "100" ), format::sm ), illegal_encoding_error );
  CHECK_THROWS_AS( encode( 4, format::tc, 3 ), range_error );
  CHECK_THROWS_AS( encode( -8, format::sm, 4 ), range_error );
}

TEST_CASE( "round trip and injectivity" )
{
  for ( uint32_t w : { 3u, 4u, 8u } )
  {
    for ( auto f : all_formats )
    {
      CAPTURE( w );
      CAPTURE( to_string( f ) );
      auto const range = representable_range( f, w );
      std::set<uint64_t> patterns;
      for ( int64_t v = range.lo; v <= range.hi; ++v )
      {
        auto const word = encode( v, f, w );
        CHECK( decode( word, f ) == v );
        patterns.insert( word.bits() );
      }
      CHECK( patterns.size() == range.size() );

      uint64_t illegal = 0;
      for ( uint64_t p = 0; p < ( uint64_t{ 1 } << w ); ++p )
      {
        if ( !is_legal( bit_word( p, w ), f ) )
          ++illegal;
      }
      bool const symmetric = f == format::tcs || f == format::sm;
      CHECK( illegal == ( symmetric ? 1u : 0u ) );
    }
  }
}

TEST_CASE( "conversion between formats" )
{
  /* TC -8 to SM clips to -7 */
  auto const clipped = ref_convert( bit_word::from_string( "1000" ), format::tc, format::sm, true );
  CHECK( clipped.to_string() == "1111" );
  CHECK( decode( clipped, format::sm ) == -7 );
  CHECK_THROWS_AS( ref_convert( bit_word::from_string( "1000" ), format::tc, format::sm, false ), range_error );

  /* clipping is idempotent: TC -8 -> SM -7 -> TC -7 */
  CHECK( decode( ref_convert( clipped, format::sm, format::tc, true ), format::tc ) == -7 );

  /* oracle: TC -3 at width 4 written as sign 1, magnitude 3 */
  auto const tc_minus3 = encode( -3, format::tc, 4 );
  auto const sme = ref_convert( tc_minus3, format::tc, format::sme, false );
  CHECK( sme.to_string() == "1011" );
  CHECK( ( sme[3] && ( sme.bits() & 7u ) == 3u ) );
}

TEST_CASE( "conversion preserves values wherever defined" )
{
  uint32_t const w = 4;
  uint32_t pairs = 0;
  for ( auto from : all_formats )
  {
    for ( auto to : all_formats )
    {
      for ( int64_t v = -8; v <= 7; ++v )
      {
        if ( !representable_range( from, w ).contains( v ) )
          continue;
        auto const word = encode( v, from, w );
        if ( from == to )
          CHECK( ref_convert( word, from, to, false ) == word );
        if ( representable_range( to, w ).contains( v ) )
          CHECK( decode( ref_convert( word, from, to, false ), to ) == v );
        else
          CHECK_THROWS_AS( ref_convert( word, from, to, false ), range_error );
      }
      if ( from != to )
        ++pairs;
    }
  }
  CHECK( pairs == 12u );
}

TEST_CASE( "golden multiplication" )
{
  CHECK( ref_multiply( -8, 3, 4 ) == -24 );
  CHECK( ref_multiply( 0, 7, 4 ) == 0 );
  CHECK( ref_multiply( -7, -7, 4 ) == 49 );
  CHECK( ref_multiply( -8, -8, 4 ) == 64 );
  CHECK_THROWS_AS( ref_multiply( 8, 1, 4 ), range_error );

  /* width-4 products fit the 8-bit two's complement range */
  for ( int64_t a = -8; a <= 7; ++a )
  {
    for ( int64_t b = -8; b <= 7; ++b )
    {
      auto const p = ref_multiply( a, b, 4 );
      CHECK( p >= -128 );
      CHECK( p <= 127 );
    }
  }
}

TEST_CASE( "format names" )
{
  for ( auto f : all_formats )
    CHECK( format_from_string( to_string( f ) ) == f );
  CHECK( format_from_string( "sme" ) == format::sme );
  CHECK_THROWS_AS( format_from_string( "OC" ), error );
  CHECK( bit_word::from_string( "0110" ).bits() == 6u );
  CHECK_THROWS( bit_word::from_string( "01a" ) );
}
