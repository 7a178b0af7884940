#include "rewrite_detail.hpp"

#include <algorithm>
#include <optional>
#include <unordered_map>

#include <smpower/rewrite.hpp>
#include <smpower/truth_table.hpp>

namespace smpower
{

namespace
{

/* AND with constant propagation plus the two-level rules of structural hashing */
aig_signal two_level_and( aig_network& r, aig_signal a, aig_signal b )
{
  for ( auto [x, y] : { std::pair{ a, b }, std::pair{ b, a } } )
  {
    auto const ny = get_node( y );
    if ( !r.is_and( ny ) )
      continue;
    auto const c = r.fanin0( ny ), d = r.fanin1( ny );
    if ( !is_complemented( y ) )
    {
      if ( x == c || x == d )
        return y;
      if ( x == operator_not( c ) || x == operator_not( d ) )
        return aig_const0;
    }
    else
    {
      if ( x == operator_not( c ) || x == operator_not( d ) )
        return x;
      if ( x == c )
        return r.create_and( c, operator_not( d ) );
      if ( x == d )
        return r.create_and( operator_not( c ), d );
    }
  }
  if ( !is_complemented( a ) && !is_complemented( b ) && r.is_and( get_node( a ) ) && r.is_and( get_node( b ) ) )
  {
    for ( auto p : { r.fanin0( get_node( a ) ), r.fanin1( get_node( a ) ) } )
      for ( auto q : { r.fanin0( get_node( b ) ), r.fanin1( get_node( b ) ) } )
        if ( p == operator_not( q ) )
          return aig_const0;
  }
  return r.create_and( a, b );
}

std::vector<aig_node> freed_images( detail::rebuilder& rb, std::vector<aig_node> const& cone, aig_node root )
{
  std::vector<aig_node> freed;
  for ( auto m : cone )
  {
    if ( m == root )
      continue;
    auto const image = get_node( rb.mapped_node( m ) );
    if ( rb.result().is_and( image ) )
      freed.push_back( image );
  }
  return freed;
}

struct replacement
{
  int gain = 0;
  uint32_t level = 0;
  small_dag const* dag = nullptr;
  std::vector<aig_signal> leaves;
};

/* evaluates replacing `n` by `dag` over `leaves` and keeps it if it beats `best` */
void consider( detail::rebuilder& rb, std::vector<uint32_t>& refs, aig_node n, std::span<aig_node const> old_leaves, small_dag const& dag,
               int min_gain, std::optional<uint32_t> max_level, std::optional<replacement>& best )
{
  auto const& old = rb.old();
  auto const cone = detail::mffc( old, refs, n, old_leaves );
  auto const freed = freed_images( rb, cone, n );
  std::vector<aig_signal> leaves;
  for ( auto l : old_leaves )
    leaves.push_back( rb.mapped_node( l ) );
  auto const dr = detail::dry_run( rb, dag, leaves, freed );
  int const gain = static_cast<int>( cone.size() ) - static_cast<int>( dr.added );
  if ( gain < min_gain || ( max_level && dr.level > *max_level ) )
    return;
  if ( gain == 0 && dr.exists )
  {
    /* a zero-gain move onto the structure that is already there changes nothing */
    auto const current = rb.result().find_and( rb.mapped( old.fanin0( n ) ), rb.mapped( old.fanin1( n ) ) );
    if ( current && *current == dr.existing )
      return;
  }
  if ( !best || gain > best->gain || ( gain == best->gain && dr.level < best->level ) )
    best = replacement{ gain, dr.level, &dag, std::move( leaves ) };
}

} // namespace

aig_network strash( aig_network const& aig )
{
  detail::rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
    rb.set( n, two_level_and( rb.result(), rb.mapped( aig.fanin0( n ) ), rb.mapped( aig.fanin1( n ) ) ) );
  return rb.finish();
}

aig_network functional_reduction( aig_network const& aig )
{
  if ( aig.num_pis() > aig_simulation::max_inputs )
    return strash( aig );
  aig_simulation const sim( aig );
  uint32_t const words = sim.words();
  uint32_t const patterns = 1u << aig.num_pis();
  uint64_t const last_mask = patterns >= 64u ? ~uint64_t{ 0 } : ( uint64_t{ 1 } << patterns ) - 1u;

  auto normalized = [&]( aig_node n ) {
    auto const row = sim.node( n );
    std::vector<uint64_t> tt( row.begin(), row.end() );
    tt.back() &= last_mask;
    bool const flip = tt[0] & 1u;
    if ( flip )
    {
      for ( auto& w : tt )
        w = ~w;
      tt.back() &= last_mask;
    }
    return std::pair{ tt, flip };
  };
  struct hash
  {
    size_t operator()( std::vector<uint64_t> const& v ) const
    {
      uint64_t h = 0xcbf29ce484222325ull;
      for ( auto w : v )
        h = ( h ^ w ) * 0x100000001b3ull;
      return static_cast<size_t>( h );
    }
  };
  std::unordered_map<std::vector<uint64_t>, std::pair<aig_node, bool>, hash> classes;
  classes.emplace( std::vector<uint64_t>( words, 0u ), std::pair{ aig_node{ 0 }, false } );
  for ( uint32_t i = 0; i < aig.num_pis(); ++i )
  {
    auto [tt, flip] = normalized( aig.pi_at( i ) );
    classes.emplace( std::move( tt ), std::pair{ aig.pi_at( i ), flip } );
  }

  detail::rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto [tt, flip] = normalized( n );
    auto const it = classes.find( tt );
    if ( it != classes.end() )
    {
      auto const [rep, rep_flip] = it->second;
      rb.set( n, complement_if( rb.mapped_node( rep ), flip != rep_flip ) );
      continue;
    }
    classes.emplace( std::move( tt ), std::pair{ n, flip } );
    rb.set( n, rb.copy( n ) );
  }
  return rb.finish();
}

aig_network balance( aig_network const& aig )
{
  auto const refs = aig.fanout_counts();
  std::vector<bool> internal( aig.size(), false );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
    for ( auto f : { aig.fanin0( n ), aig.fanin1( n ) } )
      if ( !is_complemented( f ) && aig.is_and( get_node( f ) ) && refs[get_node( f )] == 1u )
        internal[get_node( f )] = true;

  detail::rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    if ( internal[n] )
    {
      rb.set( n, rb.copy( n ) );
      continue;
    }
    /* collect the leaves of the AND supergate rooted at n */
    std::vector<aig_signal> leaves;
    std::vector<aig_signal> stack{ aig.fanin0( n ), aig.fanin1( n ) };
    while ( !stack.empty() )
    {
      auto const f = stack.back();
      stack.pop_back();
      if ( !is_complemented( f ) && internal[get_node( f )] )
      {
        stack.push_back( aig.fanin0( get_node( f ) ) );
        stack.push_back( aig.fanin1( get_node( f ) ) );
      }
      else
      {
        leaves.push_back( rb.mapped( f ) );
      }
    }
    std::sort( leaves.begin(), leaves.end() );
    leaves.erase( std::unique( leaves.begin(), leaves.end() ), leaves.end() );
    bool contradiction = false;
    for ( size_t i = 0; i + 1u < leaves.size(); ++i )
      if ( leaves[i] == operator_not( leaves[i + 1u] ) )
        contradiction = true;
    if ( contradiction )
    {
      rb.set( n, aig_const0 );
      continue;
    }

    auto& r = rb.result();
    while ( leaves.size() > 1u )
    {
      std::stable_sort( leaves.begin(), leaves.end(), [&]( aig_signal x, aig_signal y ) { return rb.level( x ) < rb.level( y ); } );
      /* reuse an existing pair if there is one, otherwise pair the two shallowest signals */
      size_t first = 0, second = 1;
      bool reused = false;
      for ( size_t i = 0; i < leaves.size() && !reused; ++i )
      {
        for ( size_t j = i + 1u; j < leaves.size(); ++j )
        {
          auto const existing = r.find_and( leaves[i], leaves[j] );
          if ( existing && r.is_and( get_node( *existing ) ) )
          {
            first = i;
            second = j;
            reused = true;
            break;
          }
        }
      }
      auto const combined = r.create_and( leaves[first], leaves[second] );
      leaves.erase( leaves.begin() + static_cast<std::ptrdiff_t>( second ) );
      leaves.erase( leaves.begin() + static_cast<std::ptrdiff_t>( first ) );
      leaves.push_back( combined );
    }
    rb.set( n, leaves.front() );
  }
  return rb.finish();
}

namespace detail
{

aig_network cut_rewrite( aig_network const& aig, bool zero_gain, bool preserve_depth )
{
  auto refs = aig.fanout_counts();
  auto const cuts = enumerate_cuts( aig, 4u, 10u );
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    std::optional<uint32_t> max_level;
    if ( preserve_depth )
      max_level = 1u + std::max( rb.level( rb.mapped( aig.fanin0( n ) ) ), rb.level( rb.mapped( aig.fanin1( n ) ) ) );
    std::optional<replacement> best;
    for ( auto const& c : cuts[n] )
    {
      if ( c.size == 1u && c.leaves[0] == n )
        continue;
      consider( rb, refs, n, std::span<aig_node const>( c.leaves.data(), c.size ), synthesize( c.tt ), zero_gain ? 0 : 1, max_level, best );
    }
    rb.set( n, best ? instantiate( rb.result(), *best->dag, best->leaves ) : rb.copy( n ) );
  }
  return rb.finish();
}

aig_network refactor( aig_network const& aig, bool zero_gain )
{
  auto refs = aig.fanout_counts();
  std::vector<uint64_t> tts;
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto const w = reconvergence_cut( aig, n, 6u );
    std::optional<replacement> best;
    if ( w.cone.size() >= 2u )
    {
      simulate_window( aig, w, tts );
      consider( rb, refs, n, w.leaves, synthesize( tts[n] ), zero_gain ? 0 : 1, std::nullopt, best );
    }
    rb.set( n, best ? instantiate( rb.result(), *best->dag, best->leaves ) : rb.copy( n ) );
  }
  return rb.finish();
}

aig_network resubstitute( aig_network const& aig )
{
  auto refs = aig.fanout_counts();
  std::vector<uint64_t> tts;
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto const w = reconvergence_cut( aig, n, 6u );
    auto const cone = mffc( aig, refs, n, w.leaves );
    simulate_window( aig, w, tts );

    std::vector<aig_node> divisors( w.leaves.begin(), w.leaves.end() );
    for ( auto m : w.cone )
      if ( std::find( cone.begin(), cone.end(), m ) == cone.end() )
        divisors.push_back( m );
    /* side nodes whose fan-ins are already divisors */
    for ( aig_node m = aig.num_pis() + 1u; m < n && divisors.size() < 64u; ++m )
    {
      if ( std::find( divisors.begin(), divisors.end(), m ) != divisors.end() || std::find( cone.begin(), cone.end(), m ) != cone.end() )
        continue;
      auto const a = get_node( aig.fanin0( m ) ), b = get_node( aig.fanin1( m ) );
      if ( std::find( divisors.begin(), divisors.end(), a ) == divisors.end() || std::find( divisors.begin(), divisors.end(), b ) == divisors.end() )
        continue;
      tts[m] = ( tts[a] ^ ( is_complemented( aig.fanin0( m ) ) ? ~uint64_t{ 0 } : 0u ) ) &
               ( tts[b] ^ ( is_complemented( aig.fanin1( m ) ) ? ~uint64_t{ 0 } : 0u ) );
      divisors.push_back( m );
    }

    uint64_t const target = tts[n];
    std::optional<aig_signal> found;
    for ( auto d : divisors )
    {
      if ( tts[d] == target || tts[d] == ~target )
      {
        found = complement_if( rb.mapped_node( d ), tts[d] != target );
        break;
      }
    }
    if ( !found && cone.size() >= 2u )
    {
      for ( bool complement_output : { false, true } )
      {
        uint64_t const t = complement_output ? ~target : target;
        std::vector<std::pair<aig_signal, uint64_t>> covering;
        for ( auto d : divisors )
        {
          for ( bool c : { false, true } )
          {
            uint64_t const dt = c ? ~tts[d] : tts[d];
            if ( ( t & ~dt ) == 0u )
              covering.emplace_back( complement_if( rb.mapped_node( d ), c ), dt );
          }
        }
        for ( size_t i = 0; i < covering.size() && !found; ++i )
          for ( size_t j = i + 1u; j < covering.size() && !found; ++j )
            if ( ( covering[i].second & covering[j].second ) == t )
              found = complement_if( rb.result().create_and( covering[i].first, covering[j].first ), complement_output );
        if ( found )
          break;
      }
    }
    rb.set( n, found ? *found : rb.copy( n ) );
  }
  return rb.finish();
}

namespace
{

/* the network with node n's function replaced by `replacement` (an old-network signal) */
aig_network substitute( aig_network const& aig, aig_node n, aig_signal replacement )
{
  rebuilder rb( aig );
  for ( aig_node m = aig.num_pis() + 1u; m < aig.size(); ++m )
    rb.set( m, m == n ? rb.mapped( replacement ) : rb.copy( m ) );
  return rb.finish();
}

} // namespace

aig_network remove_redundancies( aig_network const& aig )
{
  if ( aig.num_pis() > aig_simulation::max_inputs )
    return strash( aig );
  auto current = aig;
  for ( aig_node n = current.num_pis() + 1u; n < current.size(); ++n )
  {
    for ( auto option : { current.fanin0( n ), current.fanin1( n ), aig_const0 } )
    {
      auto candidate = substitute( current, n, option );
      if ( candidate.num_gates() < current.num_gates() && check_equivalence( current, candidate ) )
      {
        n = std::min( n, candidate.size() ) - 1u;
        current = std::move( candidate );
        break;
      }
    }
  }
  return current;
}

} // namespace detail

} // namespace smpower
