#include "rewrite_detail.hpp"

#include <algorithm>
#include <optional>

#include <smpower/truth_table.hpp>

namespace smpower::detail
{

rebuilder::rebuilder( aig_network const& old )
    : old_( old )
{
  result_ = copy_interface( old, map_ );
}

aig_signal rebuilder::copy( aig_node n )
{
  return result_.create_and( mapped( old_.fanin0( n ) ), mapped( old_.fanin1( n ) ) );
}

uint32_t rebuilder::level( aig_signal s )
{
  while ( levels_.size() < result_.size() )
  {
    aig_node const n = static_cast<aig_node>( levels_.size() );
    if ( result_.is_and( n ) )
      levels_.push_back( 1u + std::max( levels_[get_node( result_.fanin0( n ) )], levels_[get_node( result_.fanin1( n ) )] ) );
    else
      levels_.push_back( 0u );
  }
  return levels_[get_node( s )];
}

aig_network rebuilder::finish()
{
  for ( uint32_t o = 0; o < old_.num_pos(); ++o )
    result_.create_po( mapped( old_.po_at( o ) ), old_.po_names()[o] );
  return result_.cleanup();
}

std::vector<aig_node> mffc( aig_network const& aig, std::vector<uint32_t>& refs, aig_node root, std::span<aig_node const> leaves )
{
  std::vector<aig_node> nodes{ root };
  auto inside = [&]( aig_node m ) { return aig.is_and( m ) && std::find( leaves.begin(), leaves.end(), m ) == leaves.end(); };

  std::vector<aig_node> stack{ root };
  while ( !stack.empty() )
  {
    auto const n = stack.back();
    stack.pop_back();
    for ( auto f : { aig.fanin0( n ), aig.fanin1( n ) } )
    {
      auto const m = get_node( f );
      if ( inside( m ) && --refs[m] == 0u )
      {
        nodes.push_back( m );
        stack.push_back( m );
      }
    }
  }
  /* restore the reference counts */
  for ( auto n : nodes )
  {
    for ( auto f : { aig.fanin0( n ), aig.fanin1( n ) } )
    {
      auto const m = get_node( f );
      if ( inside( m ) )
        ++refs[m];
    }
  }
  return nodes;
}

namespace
{

uint64_t expand_tt( cut6 const& c, std::array<aig_node, 6> const& leaves, uint8_t size )
{
  std::array<uint8_t, 6> position{};
  for ( uint8_t i = 0; i < c.size; ++i )
    position[i] = static_cast<uint8_t>( std::find( leaves.begin(), leaves.begin() + size, c.leaves[i] ) - leaves.begin() );
  uint64_t result = 0;
  for ( uint32_t m = 0; m < ( 1u << size ); ++m )
  {
    uint32_t index = 0;
    for ( uint8_t i = 0; i < c.size; ++i )
      index |= ( ( m >> position[i] ) & 1u ) << i;
    result |= ( ( c.tt >> index ) & 1u ) << m;
  }
  return tt6::extend( result, size );
}

} // namespace

std::vector<std::vector<cut6>> enumerate_cuts( aig_network const& aig, uint32_t k, uint32_t max_cuts )
{
  std::vector<std::vector<cut6>> cuts( aig.size() );
  auto trivial = []( aig_node n ) {
    cut6 c;
    c.size = 1;
    c.leaves[0] = n;
    c.tt = tt6::var( 0 );
    return c;
  };
  for ( aig_node n = 1; n <= aig.num_pis(); ++n )
    cuts[n].push_back( trivial( n ) );

  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto const f0 = aig.fanin0( n ), f1 = aig.fanin1( n );
    std::vector<cut6> result;
    for ( auto const& a : cuts[get_node( f0 )] )
    {
      for ( auto const& b : cuts[get_node( f1 )] )
      {
        std::array<aig_node, 12> merged{};
        auto const last = std::set_union( a.leaves.begin(), a.leaves.begin() + a.size, b.leaves.begin(), b.leaves.begin() + b.size, merged.begin() );
        auto const size = static_cast<uint32_t>( last - merged.begin() );
        if ( size > k )
          continue;
        cut6 u;
        u.size = static_cast<uint8_t>( size );
        std::copy( merged.begin(), last, u.leaves.begin() );
        auto const ta = expand_tt( a, u.leaves, u.size ) ^ ( is_complemented( f0 ) ? ~uint64_t{ 0 } : 0u );
        auto const tb = expand_tt( b, u.leaves, u.size ) ^ ( is_complemented( f1 ) ? ~uint64_t{ 0 } : 0u );
        u.tt = ta & tb;
        auto subset = []( cut6 const& small, cut6 const& large ) {
          return std::includes( large.leaves.begin(), large.leaves.begin() + large.size, small.leaves.begin(), small.leaves.begin() + small.size );
        };
        if ( std::any_of( result.begin(), result.end(), [&]( cut6 const& r ) { return subset( r, u ); } ) )
          continue;
        std::erase_if( result, [&]( cut6 const& r ) { return subset( u, r ); } );
        result.push_back( u );
      }
    }
    std::stable_sort( result.begin(), result.end(), []( cut6 const& x, cut6 const& y ) { return x.size < y.size; } );
    if ( result.size() > max_cuts )
      result.resize( max_cuts );
    result.push_back( trivial( n ) );
    cuts[n] = std::move( result );
  }
  return cuts;
}

window reconvergence_cut( aig_network const& aig, aig_node root, uint32_t k )
{
  window w;
  std::vector<aig_node> visited{ root };
  auto is_visited = [&]( aig_node n ) { return std::find( visited.begin(), visited.end(), n ) != visited.end(); };
  for ( auto f : { aig.fanin0( root ), aig.fanin1( root ) } )
  {
    if ( !is_visited( get_node( f ) ) )
    {
      visited.push_back( get_node( f ) );
      w.leaves.push_back( get_node( f ) );
    }
  }
  w.cone.push_back( root );
  while ( true )
  {
    std::optional<size_t> best;
    int best_cost = 3;
    for ( size_t i = 0; i < w.leaves.size(); ++i )
    {
      auto const l = w.leaves[i];
      if ( !aig.is_and( l ) )
        continue;
      int cost = -1;
      for ( auto f : { aig.fanin0( l ), aig.fanin1( l ) } )
        if ( !is_visited( get_node( f ) ) )
          ++cost;
      if ( static_cast<int>( w.leaves.size() ) + cost > static_cast<int>( k ) )
        continue;
      if ( cost < best_cost || ( cost == best_cost && l > w.leaves[*best] ) )
      {
        best = i;
        best_cost = cost;
      }
    }
    if ( !best )
      break;
    auto const l = w.leaves[*best];
    w.leaves.erase( w.leaves.begin() + static_cast<std::ptrdiff_t>( *best ) );
    w.cone.push_back( l );
    for ( auto f : { aig.fanin0( l ), aig.fanin1( l ) } )
    {
      if ( !is_visited( get_node( f ) ) )
      {
        visited.push_back( get_node( f ) );
        w.leaves.push_back( get_node( f ) );
      }
    }
  }
  std::sort( w.leaves.begin(), w.leaves.end() );
  std::sort( w.cone.begin(), w.cone.end() );
  return w;
}

void simulate_window( aig_network const& aig, window const& w, std::vector<uint64_t>& tts )
{
  if ( tts.size() < aig.size() )
    tts.resize( aig.size() );
  for ( size_t i = 0; i < w.leaves.size(); ++i )
    tts[w.leaves[i]] = w.leaves[i] == 0u ? 0u : tt6::var( static_cast<uint32_t>( i ) );
  for ( auto n : w.cone )
  {
    auto const f0 = aig.fanin0( n ), f1 = aig.fanin1( n );
    tts[n] = ( tts[get_node( f0 )] ^ ( is_complemented( f0 ) ? ~uint64_t{ 0 } : 0u ) ) &
             ( tts[get_node( f1 )] ^ ( is_complemented( f1 ) ? ~uint64_t{ 0 } : 0u ) );
  }
}

dry_run_result dry_run( rebuilder& rb, small_dag const& dag, std::span<aig_signal const> leaves, std::span<aig_node const> freed )
{
  struct value
  {
    std::optional<aig_signal> real;
    uint32_t level = 0;
  };
  std::vector<value> values( small_dag::first_gate + dag.gates.size() );
  values[0] = { aig_const0, 0u };
  for ( size_t i = 0; i < leaves.size() && i < 6u; ++i )
    values[1u + i] = { leaves[i], rb.level( leaves[i] ) };

  auto literal = [&]( uint32_t lit ) {
    auto v = values[lit >> 1];
    if ( v.real )
      v.real = complement_if( *v.real, lit & 1u );
    return v;
  };

  dry_run_result result;
  for ( size_t g = 0; g < dag.gates.size(); ++g )
  {
    auto const a = literal( dag.gates[g][0] );
    auto const b = literal( dag.gates[g][1] );
    value v;
    if ( a.real && b.real )
    {
      if ( auto const f = rb.result().find_and( *a.real, *b.real ) )
      {
        v.real = *f;
        v.level = rb.level( *f );
        if ( std::find( freed.begin(), freed.end(), get_node( *f ) ) != freed.end() )
          ++result.added;
        values[small_dag::first_gate + g] = v;
        continue;
      }
    }
    ++result.added;
    v.level = 1u + std::max( a.level, b.level );
    values[small_dag::first_gate + g] = v;
  }
  auto const out = literal( dag.output );
  result.level = out.level;
  result.exists = out.real.has_value();
  if ( out.real )
    result.existing = *out.real;
  return result;
}

} // namespace smpower::detail
