#include <smpower/formats.hpp>

#include <algorithm>
#include <cctype>

namespace smpower
{

namespace
{

void check_width( uint32_t width )
{
  if ( width < min_width || width > max_width )
  {
    throw invalid_width_error( "width must be in [" + std::to_string( min_width ) + ", " + std::to_string( max_width ) +
                               "], got " + std::to_string( width ) );
  }
}

uint64_t mask( uint32_t width )
{
  return width >= 64u ? ~uint64_t{ 0 } : ( uint64_t{ 1 } << width ) - 1u;
}

} // namespace

std::string_view to_string( format f )
{
  switch ( f )
  {
  case format::tc:
    return "TC";
  case format::tcs:
    return "TCS";
  case format::sm:
    return "SM";
  case format::sme:
    return "SME";
  }
  return "?";
}

format format_from_string( std::string_view name )
{
  std::string upper( name );
  std::transform( upper.begin(), upper.end(), upper.begin(), []( unsigned char c ) { return std::toupper( c ); } );
  if ( upper == "TC" )
    return format::tc;
  if ( upper == "TCS" )
    return format::tcs;
  if ( upper == "SM" )
    return format::sm;
  if ( upper == "SME" )
    return format::sme;
  throw error( "unknown format '" + std::string( name ) + "'" );
}

bit_word::bit_word( uint64_t bits, uint32_t width )
    : bits_( bits & mask( width ) ), width_( width )
{
  if ( width == 0u || width > 64u )
  {
    throw invalid_width_error( "bit_word width must be in [1, 64]" );
  }
}

bit_word bit_word::from_string( std::string_view msb_first )
{
  uint64_t bits = 0;
  for ( char c : msb_first )
  {
    if ( c != '0' && c != '1' )
    {
      throw error( "bit string may only contain '0' and '1'" );
    }
    bits = ( bits << 1 ) | static_cast<uint64_t>( c == '1' );
  }
  return bit_word( bits, static_cast<uint32_t>( msb_first.size() ) );
}

std::string bit_word::to_string() const
{
  std::string s( width_, '0' );
  for ( uint32_t i = 0; i < width_; ++i )
  {
    if ( ( *this )[i] )
      s[width_ - 1u - i] = '1';
  }
  return s;
}

value_range representable_range( format f, uint32_t width )
{
  check_width( width );
  int64_t const half = int64_t{ 1 } << ( width - 1u );
  bool const symmetric = f == format::tcs || f == format::sm;
  return { symmetric ? -half + 1 : -half, half - 1 };
}

bit_word encode( int64_t value, format f, uint32_t width )
{
  auto const range = representable_range( f, width );
  if ( !range.contains( value ) )
  {
    throw range_error( "value " + std::to_string( value ) + " is not representable in " + std::string( to_string( f ) ) +
                       " at width " + std::to_string( width ) );
  }
  switch ( f )
  {
  case format::tc:
  case format::tcs:
    return bit_word( static_cast<uint64_t>( value ), width );
  case format::sm:
  case format::sme:
  {
    uint64_t const sign = uint64_t{ 1 } << ( width - 1u );
    if ( value >= 0 )
      return bit_word( static_cast<uint64_t>( value ), width );
    if ( value == range.lo && f == format::sme )
      return bit_word( sign, width ); /* sign=1, magnitude=0 */
    return bit_word( sign | static_cast<uint64_t>( -value ), width );
  }
  }
  throw error( "unreachable" );
}

bool is_legal( bit_word word, format f )
{
  uint32_t const width = word.width();
  check_width( width );
  uint64_t const min_pattern = uint64_t{ 1 } << ( width - 1u );
  switch ( f )
  {
  case format::tc:
  case format::sme:
    return true;
  case format::tcs:
  case format::sm:
    return word.bits() != min_pattern;
  }
  return false;
}

int64_t decode( bit_word word, format f )
{
  if ( !is_legal( word, f ) )
  {
    throw illegal_encoding_error( "pattern " + word.to_string() + " is illegal in " + std::string( to_string( f ) ) );
  }
  uint32_t const width = word.width();
  uint64_t const sign = uint64_t{ 1 } << ( width - 1u );
  bool const negative = ( word.bits() & sign ) != 0u;
  switch ( f )
  {
  case format::tc:
  case format::tcs:
    return negative ? static_cast<int64_t>( word.bits() ) - static_cast<int64_t>( sign << 1 )
                    : static_cast<int64_t>( word.bits() );
  case format::sm:
  case format::sme:
  {
    auto const magnitude = static_cast<int64_t>( word.bits() & ( sign - 1u ) );
    if ( !negative )
      return magnitude;
    return magnitude == 0 ? -static_cast<int64_t>( sign ) : -magnitude;
  }
  }
  throw error( "unreachable" );
}

bit_word ref_convert( bit_word word, format from, format to, bool clip )
{
  int64_t value = decode( word, from );
  auto const target = representable_range( to, word.width() );
  if ( !target.contains( value ) && clip && value < target.lo )
  {
    value = target.lo;
  }
  return encode( value, to, word.width() );
}

int64_t ref_multiply( int64_t a, int64_t b, uint32_t width )
{
  auto const range = representable_range( format::tc, width );
  if ( !range.contains( a ) || !range.contains( b ) )
  {
    throw range_error( "operand outside the " + std::to_string( width ) + "-bit two's complement range" );
  }
  return a * b;
}

} // namespace smpower
