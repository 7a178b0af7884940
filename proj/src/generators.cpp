#include <smpower/generators.hpp>

#include <algorithm>
#include <sstream>
#include <unordered_set>

namespace smpower
{

namespace
{

constexpr std::array<block_info, 7> block_table{ {
    { "enc-tc-sm", "TC->SM", true, format::tc, format::sm, true },
    { "enc-tc-sme", "TC->SME", true, format::tc, format::sme, false },
    { "enc-tcs-sm", "TCS->SM", true, format::tcs, format::sm, false },
    { "mul-tc-tc", "TC->TC", false, format::tc, format::tc, false },
    { "mul-sm-tc", "SM->TC", false, format::sm, format::tc, false },
    { "mul-sme-tc", "SME->TC", false, format::sme, format::tc, false },
    { "mul-sm-sm", "SM->SM", false, format::sm, format::sm, false },
} };

/* A signal during construction: either a constant or a wire. */
struct bit
{
  int8_t constant = 0; /* 0 or 1 when `is_const` */
  bool is_const = true;
  wire_id wire = 0;

  static bit zero() { return {}; }
  static bit one() { return { 1, true, 0 }; }
  static bit of( wire_id w ) { return { 0, false, w }; }

  bool is_zero() const { return is_const && constant == 0; }
  bool is_one() const { return is_const && constant == 1; }
  bool operator==( bit const& o ) const
  {
    return is_const == o.is_const && ( is_const ? constant == o.constant : wire == o.wire );
  }
};

using bits = std::vector<bit>;

/* Cell-level construction helpers with constant folding. */
class circuit_builder
{
public:
  explicit circuit_builder( std::string name )
      : net_( std::move( name ) )
  {
  }

  bits add_inputs( std::string const& prefix, uint32_t width )
  {
    bits result;
    for ( uint32_t i = 0; i < width; ++i )
      result.push_back( bit::of( net_.add_input( prefix + "[" + std::to_string( i ) + "]" ) ) );
    return result;
  }

  bit inv( bit a )
  {
    if ( a.is_const )
      return a.is_one() ? bit::zero() : bit::one();
    return cell( cell_kind::inv, { a } );
  }

  bit and2( bit a, bit b )
  {
    if ( a.is_zero() || b.is_zero() )
      return bit::zero();
    if ( a.is_one() )
      return b;
    if ( b.is_one() || a == b )
      return a;
    return cell( cell_kind::and2, { a, b } );
  }

  bit nand2( bit a, bit b )
  {
    if ( a.is_const || b.is_const || a == b )
      return inv( and2( a, b ) );
    return cell( cell_kind::nand2, { a, b } );
  }

  bit or2( bit a, bit b )
  {
    if ( a.is_one() || b.is_one() )
      return bit::one();
    if ( a.is_zero() )
      return b;
    if ( b.is_zero() || a == b )
      return a;
    return cell( cell_kind::or2, { a, b } );
  }

  bit nor2( bit a, bit b )
  {
    if ( a.is_const || b.is_const || a == b )
      return inv( or2( a, b ) );
    return cell( cell_kind::nor2, { a, b } );
  }

  bit xor2( bit a, bit b )
  {
    if ( a.is_zero() )
      return b;
    if ( b.is_zero() )
      return a;
    if ( a.is_one() )
      return inv( b );
    if ( b.is_one() )
      return inv( a );
    if ( a == b )
      return bit::zero();
    return cell( cell_kind::xor2, { a, b } );
  }

  bit xnor2( bit a, bit b )
  {
    if ( a.is_const || b.is_const || a == b )
      return inv( xor2( a, b ) );
    return cell( cell_kind::xnor2, { a, b } );
  }

  /* select ? b : a */
  bit mux2( bit a, bit b, bit select )
  {
    if ( select.is_const )
      return select.is_one() ? b : a;
    if ( a == b )
      return a;
    if ( a.is_zero() )
      return and2( b, select );
    if ( b.is_zero() )
      return and2( a, inv( select ) );
    if ( a.is_one() )
      return or2( b, inv( select ) );
    if ( b.is_one() )
      return or2( a, select );
    return cell( cell_kind::mux2, { a, b, select } );
  }

  bit maj3( bit a, bit b, bit c )
  {
    if ( c.is_const )
      return c.is_one() ? or2( a, b ) : and2( a, b );
    if ( b.is_const )
      return maj3( a, c, b );
    if ( a.is_const )
      return maj3( b, c, a );
    if ( a == b || a == c )
      return a;
    if ( b == c )
      return b;
    return cell( cell_kind::maj3, { a, b, c } );
  }

  /* sum, carry */
  std::pair<bit, bit> full_adder( bit a, bit b, bit c )
  {
    std::array<bit, 3> in{ a, b, c };
    std::stable_partition( in.begin(), in.end(), []( bit const& x ) { return !x.is_const; } );
    if ( in[2].is_one() )
      return { xnor2( in[0], in[1] ), or2( in[0], in[1] ) };
    return { xor2( xor2( in[0], in[1] ), in[2] ), maj3( in[0], in[1], in[2] ) };
  }

  std::pair<bit, bit> half_adder( bit a, bit b )
  {
    if ( b.is_one() && !a.is_const )
      return { inv( a ), a };
    if ( a.is_one() && !b.is_const )
      return { inv( b ), b };
    return { xor2( a, b ), and2( a, b ) };
  }

  bit any( bits const& xs )
  {
    bit acc = bit::zero();
    for ( auto const& x : xs )
      acc = or2( acc, x );
    return acc;
  }

  /* Drives output ports `prefix[i]`; port names are given to driving cells where possible. */
  void add_outputs( std::string const& prefix, bits const& xs )
  {
    for ( uint32_t i = 0; i < xs.size(); ++i )
    {
      auto const name = prefix + "[" + std::to_string( i ) + "]";
      auto const& x = xs[i];
      if ( x.is_const )
      {
        net_.add_output( net_.add_cell( x.is_one() ? cell_kind::const1 : cell_kind::const0, {}, name ) );
        continue;
      }
      bool const is_input = std::find( net_.inputs().begin(), net_.inputs().end(), x.wire ) != net_.inputs().end();
      if ( !is_input && !named_.contains( x.wire ) )
      {
        net_.rename_wire( x.wire, name );
        named_.insert( x.wire );
      }
      net_.add_output( x.wire );
    }
  }

  /* names internal wires `prefix[i]` for inspection; constants and already named wires are skipped */
  void name_bits( std::string const& prefix, bits const& xs )
  {
    for ( uint32_t i = 0; i < xs.size(); ++i )
    {
      auto const& x = xs[i];
      if ( x.is_const || named_.contains( x.wire ) ||
           std::find( net_.inputs().begin(), net_.inputs().end(), x.wire ) != net_.inputs().end() )
        continue;
      net_.rename_wire( x.wire, prefix + "[" + std::to_string( i ) + "]" );
      named_.insert( x.wire );
    }
  }

  cell_netlist take() { return std::move( net_ ); }

private:
  bit cell( cell_kind kind, std::initializer_list<bit> ins )
  {
    std::vector<wire_id> wires;
    for ( auto const& b : ins )
      wires.push_back( b.wire );
    return bit::of( net_.add_cell( kind, std::move( wires ) ) );
  }

  cell_netlist net_;
  std::unordered_set<wire_id> named_;
};

/* Wallace-style column compression followed by a ripple-carry adder; result is taken mod 2^width. */
bits reduce_columns( circuit_builder& b, std::vector<bits> columns, uint32_t width )
{
  columns.resize( width );
  auto normalize = [&]() {
    /* fold constant ones: two ones in a column become one one in the next column */
    for ( uint32_t c = 0; c < width; ++c )
    {
      uint32_t ones = 0;
      bits kept;
      for ( auto const& x : columns[c] )
      {
        if ( x.is_one() )
          ++ones;
        else if ( !x.is_zero() )
          kept.push_back( x );
      }
      if ( ones % 2u )
        kept.push_back( bit::one() );
      if ( c + 1u < width )
      {
        for ( uint32_t k = 0; k < ones / 2u; ++k )
          columns[c + 1u].push_back( bit::one() );
      }
      columns[c] = std::move( kept );
    }
  };

  normalize();
  auto height = [&]() {
    size_t h = 0;
    for ( auto const& col : columns )
      h = std::max( h, col.size() );
    return h;
  };

  while ( height() > 2u )
  {
    std::vector<bits> next( width );
    for ( uint32_t c = 0; c < width; ++c )
    {
      auto const& col = columns[c];
      size_t i = 0;
      for ( ; i + 3u <= col.size(); i += 3u )
      {
        auto [s, cy] = b.full_adder( col[i], col[i + 1u], col[i + 2u] );
        next[c].push_back( s );
        if ( c + 1u < width )
          next[c + 1u].push_back( cy );
      }
      if ( col.size() - i == 2u && col.size() > 2u )
      {
        auto [s, cy] = b.half_adder( col[i], col[i + 1u] );
        next[c].push_back( s );
        if ( c + 1u < width )
          next[c + 1u].push_back( cy );
      }
      else
      {
        for ( ; i < col.size(); ++i )
          next[c].push_back( col[i] );
      }
    }
    columns = std::move( next );
    normalize();
  }

  bits result;
  bit carry = bit::zero();
  for ( uint32_t c = 0; c < width; ++c )
  {
    bits col = columns[c];
    if ( !carry.is_zero() )
      col.push_back( carry );
    if ( col.empty() )
    {
      result.push_back( bit::zero() );
      carry = bit::zero();
    }
    else if ( col.size() == 1u )
    {
      result.push_back( col[0] );
      carry = bit::zero();
    }
    else if ( col.size() == 2u )
    {
      auto [s, cy] = b.half_adder( col[0], col[1] );
      result.push_back( s );
      carry = cy;
    }
    else
    {
      auto [s, cy] = b.full_adder( col[0], col[1], col[2] );
      result.push_back( s );
      carry = cy;
    }
  }
  return result;
}

/* AND-array partial products, unsigned */
bits unsigned_multiply( circuit_builder& b, bits const& x, bits const& y )
{
  auto const width = static_cast<uint32_t>( x.size() + y.size() );
  std::vector<bits> columns( width );
  for ( size_t i = 0; i < x.size(); ++i )
  {
    for ( size_t j = 0; j < y.size(); ++j )
      columns[i + j].push_back( b.and2( x[i], y[j] ) );
  }
  return reduce_columns( b, std::move( columns ), width );
}

/* modified Baugh-Wooley array for two's complement operands of equal width */
bits signed_multiply( circuit_builder& b, bits const& x, bits const& y )
{
  auto const n = static_cast<uint32_t>( x.size() );
  std::vector<bits> columns( 2u * n );
  for ( uint32_t i = 0; i < n; ++i )
  {
    for ( uint32_t j = 0; j < n; ++j )
    {
      bool const one_msb = ( i == n - 1u ) != ( j == n - 1u );
      columns[i + j].push_back( one_msb ? b.nand2( x[i], y[j] ) : b.and2( x[i], y[j] ) );
    }
  }
  columns[n].push_back( bit::one() );
  columns[2u * n - 1u].push_back( bit::one() );
  return reduce_columns( b, std::move( columns ), 2u * n );
}

/* (negate ? -v : v) on `width` bits: bit i flips iff negate and any lower bit of v is set */
bits conditional_negate( circuit_builder& b, bits const& v, bit negate, uint32_t width )
{
  bits result;
  bit lower = bit::zero();
  for ( uint32_t i = 0; i < width; ++i )
  {
    bit const vi = i < v.size() ? v[i] : bit::zero();
    result.push_back( b.xor2( vi, b.and2( negate, lower ) ) );
    lower = b.or2( lower, vi );
  }
  return result;
}

void check_spec( block_spec const& spec )
{
  if ( spec.width < min_width || spec.width > 16u )
  {
    throw invalid_width_error( "generator width must be in [2, 16], got " + std::to_string( spec.width ) );
  }
}

std::string block_name( block_spec const& spec )
{
  std::string name( info( spec.block ).name );
  std::replace( name.begin(), name.end(), '-', '_' );
  return name + "_w" + std::to_string( spec.width );
}

} // namespace

block_info const& info( block_kind block )
{
  return block_table[static_cast<size_t>( block )];
}

std::optional<block_kind> block_from_string( std::string_view name )
{
  for ( size_t i = 0; i < block_table.size(); ++i )
  {
    if ( block_table[i].name == name )
      return static_cast<block_kind>( i );
  }
  return std::nullopt;
}

value_range operand_range( block_spec const& spec )
{
  return representable_range( info( spec.block ).input_format, spec.width );
}

cell_netlist build_encoder( block_spec const& spec )
{
  check_spec( spec );
  if ( !info( spec.block ).is_encoder )
    throw error( "build_encoder called with a multiplier block" );

  auto const w = spec.width;
  circuit_builder b( block_name( spec ) );
  auto const x = b.add_inputs( "x", w );
  bit const sign = x[w - 1u];

  /* magnitude of a two's complement value, modulo 2^(w-1): TC(-2^(w-1)) maps to magnitude 0 */
  bits magnitude = conditional_negate( b, bits( x.begin(), x.end() - 1 ), sign, w - 1u );

  if ( spec.block == block_kind::enc_tc_sm )
  {
    /* clip the most negative value to the most negative symmetric value */
    bit const is_min = b.and2( sign, b.inv( b.any( bits( x.begin(), x.end() - 1 ) ) ) );
    for ( auto& m : magnitude )
      m = b.or2( m, is_min );
  }

  magnitude.push_back( sign );
  b.add_outputs( "y", magnitude );
  return b.take();
}

cell_netlist build_multiplier( block_spec const& spec )
{
  check_spec( spec );
  if ( info( spec.block ).is_encoder )
    throw error( "build_multiplier called with an encoder block" );

  auto const w = spec.width;
  circuit_builder b( block_name( spec ) );
  auto const a = b.add_inputs( "a", w );
  auto const c = b.add_inputs( "b", w );

  if ( spec.block == block_kind::mul_tc_tc )
  {
    b.add_outputs( "p", signed_multiply( b, a, c ) );
    return b.take();
  }

  bits mag_a( a.begin(), a.end() - 1 );
  bits mag_b( c.begin(), c.end() - 1 );
  bit const sign_a = a[w - 1u];
  bit const sign_b = c[w - 1u];
  bit const negative = b.xor2( sign_a, sign_b );

  switch ( spec.block )
  {
  case block_kind::mul_sm_tc:
  {
    auto const product = unsigned_multiply( b, mag_a, mag_b );
    auto const result = conditional_negate( b, product, negative, 2u * w );
    b.add_outputs( "p", result );
    b.name_bits( "prod", product );
    break;
  }
  case block_kind::mul_sme_tc:
  {
    /* sign=1, magnitude=0 encodes -2^(w-1). Its magnitude is substituted by 2^(w-2), which is the other
       magnitude wired w-2 positions up, and shifted left once more. The base product is zero whenever a
       substitution happens, so the terms occupy disjoint cases and are merged by OR. */
    bit const min_a = b.and2( sign_a, b.inv( b.any( mag_a ) ) );
    bit const min_b = b.and2( sign_b, b.inv( b.any( mag_b ) ) );
    auto shifted = unsigned_multiply( b, mag_a, mag_b );
    b.name_bits( "prod", shifted );
    shifted.push_back( b.and2( min_a, min_b ) );
    /* a substituted operand has a zero magnitude, so OR-ing both magnitudes selects the other one */
    bit const substituted = b.or2( min_a, min_b );
    for ( uint32_t i = 0; i + 1u < w; ++i )
    {
      auto& target = shifted[w - 1u + i];
      target = b.or2( target, b.and2( substituted, b.or2( mag_a[i], mag_b[i] ) ) );
    }
    b.add_outputs( "p", conditional_negate( b, shifted, negative, 2u * w ) );
    b.name_bits( "shifted", shifted );
    break;
  }
  case block_kind::mul_sm_sm:
  {
    auto product = unsigned_multiply( b, mag_a, mag_b );
    /* no negative zero: the sign is cleared for a zero product */
    bit const sign = b.and2( negative, b.any( product ) );
    product.resize( 2u * w - 1u, bit::zero() );
    product.push_back( sign );
    b.add_outputs( "p", product );
    break;
  }
  default:
    break;
  }
  return b.take();
}

cell_netlist build_block( block_spec const& spec )
{
  return info( spec.block ).is_encoder ? build_encoder( spec ) : build_multiplier( spec );
}

bit_word golden_output( block_spec const& spec, std::vector<int64_t> const& operands )
{
  auto const& bi = info( spec.block );
  if ( operands.size() != num_operands( spec.block ) )
    throw error( "golden model expects " + std::to_string( num_operands( spec.block ) ) + " operands" );
  if ( bi.is_encoder )
  {
    auto const word = encode( operands[0], bi.input_format, spec.width );
    return ref_convert( word, bi.input_format, bi.output_format, bi.clips );
  }
  auto const range = operand_range( spec );
  for ( auto v : operands )
  {
    if ( !range.contains( v ) )
      throw range_error( "operand " + std::to_string( v ) + " outside the block's input range" );
  }
  return encode( ref_multiply( operands[0], operands[1], spec.width ), bi.output_format, 2u * spec.width );
}

std::string counterexample::describe() const
{
  std::ostringstream os;
  os << "operands (";
  for ( size_t i = 0; i < operands.size(); ++i )
    os << ( i ? ", " : "" ) << operands[i];
  os << "), input pattern 0x" << std::hex << input_pattern << std::dec << ": expected " << expected.to_string()
     << ", got " << actual.to_string();
  return os.str();
}

verification_result verify_exhaustive( cell_netlist const& n, block_spec const& spec )
{
  auto const& bi = info( spec.block );
  if ( n.inputs().size() != num_input_bits( spec ) || n.outputs().size() != num_output_bits( spec ) )
  {
    throw error( "netlist has " + std::to_string( n.inputs().size() ) + " inputs / " +
                 std::to_string( n.outputs().size() ) + " outputs, block " + std::string( bi.name ) + " at width " +
                 std::to_string( spec.width ) + " needs " + std::to_string( num_input_bits( spec ) ) + " / " +
                 std::to_string( num_output_bits( spec ) ) );
  }

  auto const w = spec.width;
  auto const operands = num_operands( spec.block );
  uint64_t const per_operand = uint64_t{ 1 } << w;
  uint64_t const total = operands == 1u ? per_operand : per_operand * per_operand;

  verification_result result;
  for ( uint64_t pattern = 0; pattern < total; ++pattern )
  {
    std::vector<int64_t> values;
    bool legal = true;
    for ( uint32_t k = 0; k < operands; ++k )
    {
      bit_word const word( ( pattern >> ( k * w ) ) & ( per_operand - 1u ), w );
      if ( !is_legal( word, bi.input_format ) )
      {
        legal = false;
        break;
      }
      values.push_back( decode( word, bi.input_format ) );
    }
    if ( !legal )
      continue;

    ++result.checked;
    auto const expected = golden_output( spec, values );
    auto const actual = evaluate( n, pattern ).output_word();
    if ( actual != expected )
    {
      result.failure = counterexample{ values, pattern, expected, actual };
      return result;
    }
    ++result.passed;
  }
  return result;
}

} // namespace smpower
