#include <smpower/aig.hpp>

#include <algorithm>
#include <sstream>

namespace smpower
{

namespace
{

uint64_t strash_key( aig_signal a, aig_signal b )
{
  return ( static_cast<uint64_t>( a ) << 32 ) | b;
}

} // namespace

aig_network::aig_network()
{
  fanins_.push_back( { aig_const0, aig_const0 } );
}

aig_signal aig_network::create_pi( std::string name )
{
  if ( num_gates() != 0u )
    throw error( "primary inputs must be created before AND nodes" );
  if ( name.empty() )
    name = "pi" + std::to_string( num_pis() );
  fanins_.push_back( { aig_const0, aig_const0 } );
  pi_names_.push_back( std::move( name ) );
  return make_signal( size() - 1u );
}

void aig_network::create_po( aig_signal f, std::string name )
{
  if ( get_node( f ) >= size() )
    throw error( "output signal refers to an unknown node" );
  if ( name.empty() )
    name = "po" + std::to_string( num_pos() );
  pos_.push_back( f );
  po_names_.push_back( std::move( name ) );
}

std::optional<aig_signal> aig_network::find_and( aig_signal a, aig_signal b ) const
{
  if ( a > b )
    std::swap( a, b );
  if ( a == aig_const0 )
    return aig_const0;
  if ( a == aig_const1 )
    return b;
  if ( a == b )
    return a;
  if ( a == operator_not( b ) )
    return aig_const0;
  auto const it = strash_.find( strash_key( a, b ) );
  if ( it == strash_.end() )
    return std::nullopt;
  return make_signal( it->second );
}

aig_signal aig_network::create_and( aig_signal a, aig_signal b )
{
  if ( auto const existing = find_and( a, b ) )
    return *existing;
  if ( a > b )
    std::swap( a, b );
  if ( get_node( b ) >= size() )
    throw error( "AND fan-in refers to an unknown node" );
  aig_node const n = size();
  fanins_.push_back( { a, b } );
  strash_.emplace( strash_key( a, b ), n );
  return make_signal( n );
}

aig_signal aig_network::create_or( aig_signal a, aig_signal b )
{
  return operator_not( create_and( operator_not( a ), operator_not( b ) ) );
}

aig_signal aig_network::create_xor( aig_signal a, aig_signal b )
{
  auto const left = create_and( a, operator_not( b ) );
  auto const right = create_and( operator_not( a ), b );
  return create_or( left, right );
}

aig_signal aig_network::create_mux( aig_signal sel, aig_signal then_, aig_signal else_ )
{
  if ( then_ == else_ )
    return then_;
  return create_or( create_and( sel, then_ ), create_and( operator_not( sel ), else_ ) );
}

aig_signal aig_network::create_maj( aig_signal a, aig_signal b, aig_signal c )
{
  return create_or( create_and( a, b ), create_and( c, create_or( a, b ) ) );
}

std::vector<uint32_t> aig_network::fanout_counts() const
{
  std::vector<uint32_t> counts( size(), 0u );
  for ( aig_node n = num_pis() + 1u; n < size(); ++n )
  {
    ++counts[get_node( fanins_[n][0] )];
    ++counts[get_node( fanins_[n][1] )];
  }
  for ( auto f : pos_ )
    ++counts[get_node( f )];
  return counts;
}

std::vector<uint32_t> aig_network::levels() const
{
  std::vector<uint32_t> level( size(), 0u );
  for ( aig_node n = num_pis() + 1u; n < size(); ++n )
    level[n] = 1u + std::max( level[get_node( fanins_[n][0] )], level[get_node( fanins_[n][1] )] );
  return level;
}

uint32_t aig_network::depth() const
{
  auto const level = levels();
  uint32_t d = 0;
  for ( auto f : pos_ )
    d = std::max( d, level[get_node( f )] );
  return d;
}

aig_network copy_interface( aig_network const& from, std::vector<aig_signal>& old_to_new )
{
  aig_network result;
  result.set_name( from.name() );
  old_to_new.assign( from.size(), aig_const0 );
  for ( uint32_t i = 0; i < from.num_pis(); ++i )
    old_to_new[from.pi_at( i )] = result.create_pi( from.pi_names()[i] );
  return result;
}

aig_network aig_network::cleanup() const
{
  std::vector<bool> reachable( size(), false );
  for ( auto f : pos_ )
    reachable[get_node( f )] = true;
  for ( aig_node n = size(); n-- > num_pis() + 1u; )
  {
    if ( reachable[n] )
    {
      reachable[get_node( fanins_[n][0] )] = true;
      reachable[get_node( fanins_[n][1] )] = true;
    }
  }
  std::vector<aig_signal> map;
  auto result = copy_interface( *this, map );
  for ( aig_node n = num_pis() + 1u; n < size(); ++n )
  {
    if ( !reachable[n] )
      continue;
    auto const a = complement_if( map[get_node( fanins_[n][0] )], is_complemented( fanins_[n][0] ) );
    auto const b = complement_if( map[get_node( fanins_[n][1] )], is_complemented( fanins_[n][1] ) );
    map[n] = result.create_and( a, b );
  }
  for ( uint32_t i = 0; i < num_pos(); ++i )
    result.create_po( complement_if( map[get_node( pos_[i] )], is_complemented( pos_[i] ) ), po_names_[i] );
  return result;
}

bool operator==( aig_network const& a, aig_network const& b )
{
  return a.fanins_ == b.fanins_ && a.pos_ == b.pos_ && a.pi_names_ == b.pi_names_ && a.po_names_ == b.po_names_;
}

namespace
{

/* writes the truth tables of all nodes for the pattern block starting at `offset` */
void simulate_block( aig_network const& aig, uint64_t offset, uint32_t words, std::vector<uint64_t>& data )
{
  data.assign( static_cast<size_t>( aig.size() ) * words, 0u );
  for ( uint32_t k = 0; k < aig.num_pis(); ++k )
  {
    uint64_t* row = data.data() + static_cast<size_t>( aig.pi_at( k ) ) * words;
    for ( uint32_t i = 0; i < words; ++i )
    {
      uint64_t const first = offset + 64u * i;
      if ( k < 6u )
      {
        static constexpr uint64_t patterns[] = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                                 0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };
        row[i] = patterns[k];
      }
      else
      {
        row[i] = ( ( first >> k ) & 1u ) ? ~uint64_t{ 0 } : 0u;
      }
    }
  }
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto const f0 = aig.fanin0( n );
    auto const f1 = aig.fanin1( n );
    uint64_t const m0 = is_complemented( f0 ) ? ~uint64_t{ 0 } : 0u;
    uint64_t const m1 = is_complemented( f1 ) ? ~uint64_t{ 0 } : 0u;
    uint64_t const* a = data.data() + static_cast<size_t>( get_node( f0 ) ) * words;
    uint64_t const* b = data.data() + static_cast<size_t>( get_node( f1 ) ) * words;
    uint64_t* r = data.data() + static_cast<size_t>( n ) * words;
    for ( uint32_t i = 0; i < words; ++i )
      r[i] = ( a[i] ^ m0 ) & ( b[i] ^ m1 );
  }
}

uint64_t valid_mask( uint32_t num_pis )
{
  return num_pis >= 6u ? ~uint64_t{ 0 } : ( uint64_t{ 1 } << ( 1u << num_pis ) ) - 1u;
}

} // namespace

aig_simulation::aig_simulation( aig_network const& aig )
    : words_( aig.num_pis() <= 6u ? 1u : 1u << ( aig.num_pis() - 6u ) ),
      num_pis_( aig.num_pis() )
{
  if ( aig.num_pis() > max_inputs )
    throw unsupported_error( "exhaustive simulation supports at most 16 inputs" );
  simulate_block( aig, 0u, words_, data_ );
}

std::vector<uint64_t> aig_simulation::signal( aig_signal s ) const
{
  auto const row = node( get_node( s ) );
  std::vector<uint64_t> tt( row.begin(), row.end() );
  if ( is_complemented( s ) )
  {
    for ( auto& w : tt )
      w = ~w;
  }
  tt.back() &= valid_mask( num_pis_ );
  return tt;
}

bool check_equivalence( aig_network const& a, aig_network const& b )
{
  if ( a.num_pis() != b.num_pis() || a.num_pos() != b.num_pos() )
    throw error( "equivalence check needs equal input and output counts" );
  if ( a.num_pis() > 20u )
    throw unsupported_error( "exhaustive equivalence checking supports at most 20 inputs" );

  uint32_t const n = a.num_pis();
  uint32_t const block_words = n <= 6u ? 1u : std::min<uint32_t>( 1u << ( n - 6u ), 256u );
  uint64_t const total_patterns = uint64_t{ 1 } << n;
  uint64_t const block_patterns = 64u * block_words;
  uint64_t const mask = valid_mask( n );

  std::vector<uint64_t> da, db;
  for ( uint64_t offset = 0; offset < total_patterns; offset += block_patterns )
  {
    simulate_block( a, offset, block_words, da );
    simulate_block( b, offset, block_words, db );
    for ( uint32_t o = 0; o < a.num_pos(); ++o )
    {
      auto const fa = a.po_at( o );
      auto const fb = b.po_at( o );
      uint64_t const ca = is_complemented( fa ) ? ~uint64_t{ 0 } : 0u;
      uint64_t const cb = is_complemented( fb ) ? ~uint64_t{ 0 } : 0u;
      uint64_t const* ra = da.data() + static_cast<size_t>( get_node( fa ) ) * block_words;
      uint64_t const* rb = db.data() + static_cast<size_t>( get_node( fb ) ) * block_words;
      for ( uint32_t i = 0; i < block_words; ++i )
      {
        uint64_t const m = ( block_words == 1u ) ? mask : ~uint64_t{ 0 };
        if ( ( ( ra[i] ^ ca ) ^ ( rb[i] ^ cb ) ) & m )
          return false;
      }
    }
  }
  return true;
}

std::vector<bool> simulate_pattern( aig_network const& aig, uint64_t pattern )
{
  std::vector<bool> value( aig.size(), false );
  for ( uint32_t k = 0; k < aig.num_pis(); ++k )
    value[aig.pi_at( k )] = ( ( pattern >> k ) & 1u ) != 0u;
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    bool const a = value[get_node( aig.fanin0( n ) )] != is_complemented( aig.fanin0( n ) );
    bool const b = value[get_node( aig.fanin1( n ) )] != is_complemented( aig.fanin1( n ) );
    value[n] = a && b;
  }
  std::vector<bool> outputs;
  for ( auto f : aig.pos() )
    outputs.push_back( value[get_node( f )] != is_complemented( f ) );
  return outputs;
}

std::string to_text( aig_network const& aig )
{
  auto lit = []( aig_signal s ) { return std::to_string( get_node( s ) ) + ( is_complemented( s ) ? "-" : "+" ); };
  std::ostringstream os;
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
    os << "PI " << aig.pi_at( i ) << ' ' << aig.pi_names()[i] << '\n';
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
    os << n << " AND " << lit( aig.fanin0( n ) ) << ' ' << lit( aig.fanin1( n ) ) << '\n';
  for ( uint32_t o = 0; o < aig.num_pos(); ++o )
    os << "OUT " << aig.po_names()[o] << ' ' << lit( aig.po_at( o ) ) << '\n';
  return os.str();
}

} // namespace smpower
