#include <smpower/resynthesis.hpp>

#include <algorithm>
#include <optional>

#include <smpower/truth_table.hpp>

namespace smpower
{

namespace
{

uint64_t dag_key( uint32_t a, uint32_t b )
{
  return ( static_cast<uint64_t>( a ) << 32 ) | b;
}

struct cube
{
  uint8_t mask = 0;     /*!< variables present */
  uint8_t polarity = 0; /*!< 1 = positive literal */
};

/* Minato-Morreale irredundant sum of products for an interval [on, ondc] */
uint64_t isop( uint64_t on, uint64_t ondc, uint32_t num_vars, std::vector<cube>& cubes )
{
  if ( on == 0u )
    return 0u;
  if ( ondc == ~uint64_t{ 0 } )
  {
    cubes.push_back( {} );
    return ~uint64_t{ 0 };
  }
  uint32_t v = num_vars;
  while ( v-- > 0u )
  {
    if ( tt6::has_var( on, v ) || tt6::has_var( ondc, v ) )
      break;
  }
  auto const on0 = tt6::cofactor0( on, v ), on1 = tt6::cofactor1( on, v );
  auto const dc0 = tt6::cofactor0( ondc, v ), dc1 = tt6::cofactor1( ondc, v );

  auto const begin0 = cubes.size();
  auto const r0 = isop( on0 & ~dc1, dc0, v, cubes );
  for ( auto i = begin0; i < cubes.size(); ++i )
    cubes[i].mask |= 1u << v;
  auto const begin1 = cubes.size();
  auto const r1 = isop( on1 & ~dc0, dc1, v, cubes );
  for ( auto i = begin1; i < cubes.size(); ++i )
  {
    cubes[i].mask |= 1u << v;
    cubes[i].polarity |= 1u << v;
  }
  auto const r2 = isop( ( on0 & ~r0 ) | ( on1 & ~r1 ), dc0 & dc1, v, cubes );
  return ( r0 & ~tt6::var( v ) ) | ( r1 & tt6::var( v ) ) | r2;
}

std::vector<cube> isop( uint64_t tt )
{
  std::vector<cube> cubes;
  isop( tt, tt, 6u, cubes );
  return cubes;
}

uint32_t balanced_and( dag_builder& b, std::vector<uint32_t> lits )
{
  if ( lits.empty() )
    return 1u;
  while ( lits.size() > 1u )
  {
    std::vector<uint32_t> next;
    for ( size_t i = 0; i + 1u < lits.size(); i += 2u )
      next.push_back( b.create_and( lits[i], lits[i + 1u] ) );
    if ( lits.size() % 2u )
      next.push_back( lits.back() );
    lits = std::move( next );
  }
  return lits.front();
}

uint32_t cube_and( dag_builder& b, cube c )
{
  std::vector<uint32_t> lits;
  for ( uint32_t v = 0; v < 6u; ++v )
    if ( c.mask & ( 1u << v ) )
      lits.push_back( dag_leaf( v ) ^ ( ( c.polarity >> v ) & 1u ? 0u : 1u ) );
  return balanced_and( b, std::move( lits ) );
}

/* algebraic factoring by repeated division with the most frequent literal */
uint32_t factor( dag_builder& b, std::vector<cube> const& cubes, std::mt19937_64* rng )
{
  if ( cubes.empty() )
    return 0u;
  for ( auto const& c : cubes )
    if ( c.mask == 0u )
      return 1u;
  if ( cubes.size() == 1u )
    return cube_and( b, cubes.front() );

  std::array<uint32_t, 12> count{};
  for ( auto const& c : cubes )
    for ( uint32_t v = 0; v < 6u; ++v )
      if ( c.mask & ( 1u << v ) )
        ++count[2u * v + ( ( c.polarity >> v ) & 1u )];
  uint32_t const best_count = *std::max_element( count.begin(), count.end() );
  if ( best_count <= 1u )
  {
    std::vector<uint32_t> terms;
    for ( auto const& c : cubes )
      terms.push_back( cube_and( b, c ) ^ 1u );
    return balanced_and( b, std::move( terms ) ) ^ 1u;
  }
  std::vector<uint32_t> ties;
  for ( uint32_t l = 0; l < 12u; ++l )
    if ( count[l] == best_count )
      ties.push_back( l );
  uint32_t const lit = rng ? ties[( *rng )() % ties.size()] : ties.front();
  uint32_t const v = lit / 2u;
  uint8_t const positive = static_cast<uint8_t>( lit & 1u );

  std::vector<cube> quotient, rest;
  for ( auto c : cubes )
  {
    if ( ( c.mask & ( 1u << v ) ) && ( ( c.polarity >> v ) & 1u ) == positive )
    {
      c.mask &= static_cast<uint8_t>( ~( 1u << v ) );
      c.polarity &= static_cast<uint8_t>( ~( 1u << v ) );
      quotient.push_back( c );
    }
    else
    {
      rest.push_back( c );
    }
  }
  auto const q = b.create_and( dag_leaf( v ) ^ ( positive ? 0u : 1u ), factor( b, quotient, rng ) );
  if ( rest.empty() )
    return q;
  return b.create_or( q, factor( b, rest, rng ) );
}

small_dag factored_form( uint64_t tt, bool complement, std::mt19937_64* rng )
{
  dag_builder b;
  auto const out = factor( b, isop( complement ? ~tt : tt ), rng );
  return std::move( b ).finish( out ^ ( complement ? 1u : 0u ) );
}

std::optional<uint32_t> trivial_literal( uint64_t tt )
{
  if ( tt == 0u )
    return 0u;
  if ( tt == ~uint64_t{ 0 } )
    return 1u;
  for ( uint32_t v = 0; v < 6u; ++v )
  {
    if ( tt == tt6::var( v ) )
      return dag_leaf( v );
    if ( tt == ~tt6::var( v ) )
      return dag_leaf( v ) ^ 1u;
  }
  return std::nullopt;
}

uint64_t cofactor0_all( uint64_t tt, uint32_t vars )
{
  for ( uint32_t v = 0; v < 6u; ++v )
    if ( vars & ( 1u << v ) )
      tt = tt6::cofactor0( tt, v );
  return tt;
}

uint64_t exists_all( uint64_t tt, uint32_t vars )
{
  for ( uint32_t v = 0; v < 6u; ++v )
    if ( vars & ( 1u << v ) )
      tt = tt6::exists( tt, v );
  return tt;
}

struct synthesis_cache
{
  std::unordered_map<uint64_t, small_dag> entries;
  uint32_t depth = 0;
};

thread_local synthesis_cache cache;

small_dag compute( uint64_t tt );

small_dag const& lookup( uint64_t tt )
{
  auto it = cache.entries.find( tt );
  if ( it == cache.entries.end() )
  {
    auto dag = compute( tt );
    it = cache.entries.emplace( tt, std::move( dag ) ).first;
  }
  return it->second;
}

small_dag compute( uint64_t tt )
{
  if ( auto const lit = trivial_literal( tt ) )
  {
    small_dag d;
    d.output = *lit;
    return d;
  }
  uint32_t const supp = tt6::support( tt );

  /* single-variable AND/OR decompositions are taken directly */
  for ( uint32_t v = 0; v < 6u; ++v )
  {
    if ( !( supp & ( 1u << v ) ) )
      continue;
    auto const c0 = tt6::cofactor0( tt, v ), c1 = tt6::cofactor1( tt, v );
    std::optional<std::pair<uint32_t, uint64_t>> decomposition; /* (leaf literal, remainder); f = lit & rem or its dual */
    bool dual = false;
    if ( c0 == 0u )
      decomposition = { dag_leaf( v ), c1 };
    else if ( c1 == 0u )
      decomposition = { dag_leaf( v ) ^ 1u, c0 };
    else if ( c0 == ~uint64_t{ 0 } )
      decomposition = { dag_leaf( v ), ~c1 }, dual = true; /* f = !v | c1 = !( v & !c1 ) */
    else if ( c1 == ~uint64_t{ 0 } )
      decomposition = { dag_leaf( v ) ^ 1u, ~c0 }, dual = true; /* f = v | c0 = !( !v & !c0 ) */
    if ( decomposition )
    {
      dag_builder b;
      auto const rest = b.import( lookup( decomposition->second ) );
      auto const out = b.create_and( decomposition->first, rest );
      return std::move( b ).finish( out ^ ( dual ? 1u : 0u ) );
    }
  }

  std::optional<small_dag> best;
  auto consider = [&]( small_dag&& d ) {
    if ( !best || d.num_gates() < best->num_gates() )
      best = std::move( d );
  };

  /* disjoint-support AND, OR and XOR decompositions */
  uint32_t const lowest = supp & ( ~supp + 1u );
  for ( uint32_t a = supp; a != 0u; a = ( a - 1u ) & supp )
  {
    if ( !( a & lowest ) || a == supp )
      continue;
    uint32_t const rest = supp & ~a;
    for ( bool complement : { false, true } )
    {
      uint64_t const f = complement ? ~tt : tt;
      auto const g = exists_all( f, rest ), h = exists_all( f, a );
      if ( ( g & h ) == f )
      {
        dag_builder b;
        auto const x = b.import( lookup( g ) );
        auto const y = b.import( lookup( h ) );
        auto const out = b.create_and( x, y ) ^ ( complement ? 1u : 0u );
        consider( std::move( b ).finish( out ) );
      }
    }
    uint64_t const constant = ( tt & 1u ) ? ~uint64_t{ 0 } : 0u;
    auto const g = cofactor0_all( tt, rest ), h = cofactor0_all( tt, a ) ^ constant;
    if ( ( g ^ h ) == tt )
    {
      dag_builder b;
      auto const x = b.import( lookup( g ) );
      auto const y = b.import( lookup( h ) );
      auto const out = b.create_xor( x, y );
      consider( std::move( b ).finish( out ) );
    }
  }

  /* Shannon expansion, with the XOR special case */
  for ( uint32_t v = 0; v < 6u; ++v )
  {
    if ( !( supp & ( 1u << v ) ) )
      continue;
    auto const c0 = tt6::cofactor0( tt, v ), c1 = tt6::cofactor1( tt, v );
    dag_builder b;
    uint32_t out;
    if ( c0 == ~c1 )
    {
      out = b.create_xor( dag_leaf( v ), b.import( lookup( c0 ) ) );
    }
    else
    {
      auto const x1 = b.import( lookup( c1 ) );
      auto const x0 = b.import( lookup( c0 ) );
      out = b.create_mux( dag_leaf( v ), x1, x0 );
    }
    consider( std::move( b ).finish( out ) );
  }

  consider( factored_form( tt, false, nullptr ) );
  consider( factored_form( tt, true, nullptr ) );
  return std::move( *best );
}

uint32_t random_structure( dag_builder& b, uint64_t tt, std::mt19937_64& rng )
{
  if ( auto const lit = trivial_literal( tt ) )
    return *lit;
  uint32_t const supp = tt6::support( tt );
  std::vector<uint32_t> vars;
  for ( uint32_t v = 0; v < 6u; ++v )
    if ( supp & ( 1u << v ) )
      vars.push_back( v );

  switch ( rng() % 4u )
  {
  case 0u:
  {
    bool const complement = rng() & 1u;
    dag_builder inner;
    auto const out = factor( inner, isop( complement ? ~tt : tt ), &rng );
    auto const dag = std::move( inner ).finish( out );
    return b.import( dag ) ^ ( complement ? 1u : 0u );
  }
  case 1u:
    return b.import( lookup( tt ) );
  default:
  {
    uint32_t const v = vars[rng() % vars.size()];
    auto const c0 = tt6::cofactor0( tt, v ), c1 = tt6::cofactor1( tt, v );
    if ( c0 == 0u )
      return b.create_and( dag_leaf( v ), random_structure( b, c1, rng ) );
    if ( c1 == 0u )
      return b.create_and( dag_leaf( v ) ^ 1u, random_structure( b, c0, rng ) );
    if ( c0 == ~c1 )
      return b.create_xor( dag_leaf( v ), random_structure( b, c0, rng ) );
    auto const x1 = random_structure( b, c1, rng );
    auto const x0 = random_structure( b, c0, rng );
    return b.create_mux( dag_leaf( v ), x1, x0 );
  }
  }
}

} // namespace

uint64_t small_dag::simulate() const
{
  std::vector<uint64_t> values( small_dag::first_gate + gates.size() );
  values[0] = 0u;
  for ( uint32_t v = 0; v < 6u; ++v )
    values[1u + v] = tt6::var( v );
  auto value = [&]( uint32_t lit ) { return values[lit >> 1] ^ ( ( lit & 1u ) ? ~uint64_t{ 0 } : 0u ); };
  for ( size_t g = 0; g < gates.size(); ++g )
    values[small_dag::first_gate + g] = value( gates[g][0] ) & value( gates[g][1] );
  return value( output );
}

uint32_t dag_builder::create_and( uint32_t a, uint32_t b )
{
  if ( a > b )
    std::swap( a, b );
  if ( a == 0u )
    return 0u;
  if ( a == 1u )
    return b;
  if ( a == b )
    return a;
  if ( ( a ^ 1u ) == b )
    return 0u;
  auto const key = dag_key( a, b );
  if ( auto const it = strash_.find( key ); it != strash_.end() )
    return it->second;
  uint32_t const lit = 2u * ( small_dag::first_gate + static_cast<uint32_t>( gates_.size() ) );
  gates_.push_back( { a, b } );
  strash_.emplace( key, lit );
  return lit;
}

uint32_t dag_builder::create_xor( uint32_t a, uint32_t b )
{
  return create_or( create_and( a, b ^ 1u ), create_and( a ^ 1u, b ) );
}

uint32_t dag_builder::create_mux( uint32_t sel, uint32_t then_, uint32_t else_ )
{
  if ( then_ == else_ )
    return then_;
  if ( then_ == ( else_ ^ 1u ) )
    return create_xor( sel, else_ );
  return create_or( create_and( sel, then_ ), create_and( sel ^ 1u, else_ ) );
}

uint32_t dag_builder::import( small_dag const& dag, std::span<uint32_t const, 6> leaves )
{
  std::vector<uint32_t> map( small_dag::first_gate + dag.gates.size() );
  map[0] = 0u;
  for ( uint32_t v = 0; v < 6u; ++v )
    map[1u + v] = leaves[v];
  auto mapped = [&]( uint32_t lit ) { return map[lit >> 1] ^ ( lit & 1u ); };
  for ( size_t g = 0; g < dag.gates.size(); ++g )
    map[small_dag::first_gate + g] = create_and( mapped( dag.gates[g][0] ), mapped( dag.gates[g][1] ) );
  return mapped( dag.output );
}

uint32_t dag_builder::import( small_dag const& dag )
{
  static constexpr std::array<uint32_t, 6> identity = { dag_leaf( 0 ), dag_leaf( 1 ), dag_leaf( 2 ),
                                                        dag_leaf( 3 ), dag_leaf( 4 ), dag_leaf( 5 ) };
  return import( dag, identity );
}

small_dag dag_builder::finish( uint32_t output ) &&
{
  small_dag d;
  d.gates = std::move( gates_ );
  d.output = output;
  /* drop gates not reachable from the output */
  std::vector<bool> used( small_dag::first_gate + d.gates.size(), false );
  used[output >> 1] = true;
  for ( size_t g = d.gates.size(); g-- > 0; )
  {
    if ( used[small_dag::first_gate + g] )
    {
      used[d.gates[g][0] >> 1] = true;
      used[d.gates[g][1] >> 1] = true;
    }
  }
  std::vector<uint32_t> map( used.size() );
  for ( uint32_t i = 0; i < small_dag::first_gate; ++i )
    map[i] = i;
  std::vector<std::array<uint32_t, 2>> kept;
  for ( size_t g = 0; g < d.gates.size(); ++g )
  {
    if ( !used[small_dag::first_gate + g] )
      continue;
    map[small_dag::first_gate + g] = small_dag::first_gate + static_cast<uint32_t>( kept.size() );
    kept.push_back( { 2u * map[d.gates[g][0] >> 1] + ( d.gates[g][0] & 1u ), 2u * map[d.gates[g][1] >> 1] + ( d.gates[g][1] & 1u ) } );
  }
  d.gates = std::move( kept );
  d.output = 2u * map[output >> 1] + ( output & 1u );
  return d;
}

small_dag const& synthesize( uint64_t tt )
{
  if ( cache.depth == 0u && cache.entries.size() > ( 1u << 20 ) )
    cache.entries.clear();
  ++cache.depth;
  auto const& result = lookup( tt );
  --cache.depth;
  return result;
}

small_dag synthesize_random( uint64_t tt, std::mt19937_64& rng )
{
  dag_builder b;
  auto const out = random_structure( b, tt, rng );
  return std::move( b ).finish( out );
}

aig_signal instantiate( aig_network& aig, small_dag const& dag, std::span<aig_signal const> leaves )
{
  std::vector<aig_signal> map( small_dag::first_gate + dag.gates.size(), aig_const0 );
  for ( size_t v = 0; v < leaves.size() && v < 6u; ++v )
    map[1u + v] = leaves[v];
  auto mapped = [&]( uint32_t lit ) { return complement_if( map[lit >> 1], lit & 1u ); };
  for ( size_t g = 0; g < dag.gates.size(); ++g )
    map[small_dag::first_gate + g] = aig.create_and( mapped( dag.gates[g][0] ), mapped( dag.gates[g][1] ) );
  return mapped( dag.output );
}

} // namespace smpower
