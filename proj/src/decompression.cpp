#include "rewrite_detail.hpp"

#include <algorithm>
#include <unordered_map>

namespace smpower::detail
{

namespace
{

bool coin( std::mt19937_64& rng, double probability )
{
  return static_cast<double>( rng() >> 11 ) * 0x1.0p-53 < probability;
}

/* a & !(c & d) = (a & !c) | (a & !d) */
aig_signal distributed( aig_network& r, aig_signal a, aig_signal c, aig_signal d )
{
  return r.create_or( r.create_and( a, operator_not( c ) ), r.create_and( a, operator_not( d ) ) );
}

/* an alternative structure for AND node n, or nullopt if none applies */
std::optional<aig_signal> restructure( rebuilder& rb, aig_node n, std::mt19937_64& rng )
{
  auto const& aig = rb.old();
  std::array<aig_signal, 2> fanins = { aig.fanin0( n ), aig.fanin1( n ) };
  if ( rng() & 1u )
    std::swap( fanins[0], fanins[1] );
  for ( bool want_complemented : { true, false } )
  {
    for ( int i = 0; i < 2; ++i )
    {
      auto const g = fanins[i];
      auto const a = fanins[1 - i];
      if ( is_complemented( g ) != want_complemented || !aig.is_and( get_node( g ) ) )
        continue;
      auto c = rb.mapped( aig.fanin0( get_node( g ) ) );
      auto d = rb.mapped( aig.fanin1( get_node( g ) ) );
      if ( rng() & 1u )
        std::swap( c, d );
      auto& r = rb.result();
      if ( want_complemented )
        return distributed( r, rb.mapped( a ), c, d );
      return r.create_and( r.create_and( rb.mapped( a ), c ), d );
    }
  }
  return std::nullopt;
}

std::vector<bool> supergate_internal( aig_network const& aig, std::vector<uint32_t> const& refs )
{
  std::vector<bool> internal( aig.size(), false );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
    for ( auto f : { aig.fanin0( n ), aig.fanin1( n ) } )
      if ( !is_complemented( f ) && aig.is_and( get_node( f ) ) && refs[get_node( f )] == 1u )
        internal[get_node( f )] = true;
  return internal;
}

} // namespace

aig_network distribute( aig_network const& aig, double fraction, std::mt19937_64& rng )
{
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    std::optional<aig_signal> alternative;
    if ( coin( rng, fraction ) )
      alternative = restructure( rb, n, rng );
    rb.set( n, alternative ? *alternative : rb.copy( n ) );
  }
  return rb.finish();
}

aig_network shannon_expand( aig_network const& aig, uint32_t targets, std::mt19937_64& rng )
{
  auto const levels = aig.levels();
  std::vector<aig_node> candidates;
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
    if ( levels[n] >= 2u )
      candidates.push_back( n );
  std::shuffle( candidates.begin(), candidates.end(), rng );
  if ( candidates.size() > targets )
    candidates.resize( targets );

  /* the chosen node's transitive fan-in and the variable to expand on */
  struct expansion
  {
    std::vector<aig_node> cone;
    aig_node variable;
  };
  std::unordered_map<aig_node, expansion> plan;
  for ( auto n : candidates )
  {
    std::vector<bool> seen( aig.size(), false );
    std::vector<aig_node> stack{ n }, cone, support;
    seen[n] = true;
    while ( !stack.empty() )
    {
      auto const m = stack.back();
      stack.pop_back();
      if ( aig.is_pi( m ) )
      {
        support.push_back( m );
        continue;
      }
      if ( !aig.is_and( m ) )
        continue;
      cone.push_back( m );
      for ( auto f : { aig.fanin0( m ), aig.fanin1( m ) } )
      {
        if ( !seen[get_node( f )] )
        {
          seen[get_node( f )] = true;
          stack.push_back( get_node( f ) );
        }
      }
    }
    std::sort( cone.begin(), cone.end() );
    std::sort( support.begin(), support.end() );
    plan.emplace( n, expansion{ std::move( cone ), support[rng() % support.size()] } );
  }

  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto const it = plan.find( n );
    if ( it == plan.end() )
    {
      rb.set( n, rb.copy( n ) );
      continue;
    }
    auto const& [cone, variable] = it->second;
    auto& r = rb.result();
    std::array<aig_signal, 2> cofactors{};
    for ( bool value : { false, true } )
    {
      std::unordered_map<aig_node, aig_signal> local;
      auto get = [&]( aig_signal f ) {
        auto const m = get_node( f );
        aig_signal s;
        if ( m == variable )
          s = r.get_constant( value );
        else if ( auto const l = local.find( m ); l != local.end() )
          s = l->second;
        else
          s = rb.mapped_node( m );
        return complement_if( s, is_complemented( f ) );
      };
      for ( auto m : cone )
        local[m] = r.create_and( get( aig.fanin0( m ) ), get( aig.fanin1( m ) ) );
      cofactors[value] = local[n];
    }
    rb.set( n, r.create_mux( rb.mapped_node( variable ), cofactors[1], cofactors[0] ) );
  }
  return rb.finish();
}

aig_network duplicate_fanouts( aig_network const& aig, uint32_t threshold, std::mt19937_64& rng )
{
  auto const refs = aig.fanout_counts();
  std::vector<aig_node> candidates;
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
    if ( refs[n] >= threshold )
      candidates.push_back( n );
  std::shuffle( candidates.begin(), candidates.end(), rng );
  candidates.resize( std::min<size_t>( candidates.size(), std::max<size_t>( 1u, candidates.size() / 4u ) ) );
  std::sort( candidates.begin(), candidates.end() );

  rebuilder rb( aig );
  std::unordered_map<aig_node, aig_signal> duplicate;
  auto pick = [&]( aig_signal f ) {
    auto const it = duplicate.find( get_node( f ) );
    if ( it != duplicate.end() && ( rng() & 1u ) )
      return complement_if( it->second, is_complemented( f ) );
    return rb.mapped( f );
  };
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    rb.set( n, rb.result().create_and( pick( aig.fanin0( n ) ), pick( aig.fanin1( n ) ) ) );
    if ( std::binary_search( candidates.begin(), candidates.end(), n ) )
    {
      if ( auto const alternative = restructure( rb, n, rng ) )
        duplicate.emplace( n, *alternative );
    }
  }
  std::vector<aig_signal> outputs;
  for ( auto f : aig.pos() )
    outputs.push_back( pick( f ) );
  for ( uint32_t o = 0; o < aig.num_pos(); ++o )
    rb.result().create_po( outputs[o], aig.po_names()[o] );
  return rb.result().cleanup();
}

aig_network rebalance_deeper( aig_network const& aig, bool random_order, std::mt19937_64& rng )
{
  auto const refs = aig.fanout_counts();
  auto const internal = supergate_internal( aig, refs );
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    if ( internal[n] )
    {
      rb.set( n, rb.copy( n ) );
      continue;
    }
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
    if ( leaves.size() < 3u )
    {
      rb.set( n, rb.copy( n ) );
      continue;
    }
    if ( random_order )
      std::shuffle( leaves.begin(), leaves.end(), rng );
    else
      std::stable_sort( leaves.begin(), leaves.end(), [&]( aig_signal x, aig_signal y ) { return rb.level( x ) > rb.level( y ); } );
    auto acc = leaves.front();
    for ( size_t i = 1; i < leaves.size(); ++i )
      acc = rb.result().create_and( acc, leaves[i] );
    rb.set( n, acc );
  }
  return rb.finish();
}

aig_network rebalance_shallower( aig_network const& aig )
{
  constexpr size_t max_leaves = 8u;
  auto const refs = aig.fanout_counts();
  auto const internal = supergate_internal( aig, refs );
  auto const old_levels = aig.levels();
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    if ( internal[n] )
    {
      rb.set( n, rb.copy( n ) );
      continue;
    }
    /* expand through shared AND nodes too, deepest first, duplicating their logic */
    std::vector<aig_signal> leaves{ aig.fanin0( n ), aig.fanin1( n ) };
    while ( true )
    {
      std::optional<size_t> best;
      for ( size_t i = 0; i < leaves.size(); ++i )
      {
        auto const f = leaves[i];
        if ( is_complemented( f ) || !aig.is_and( get_node( f ) ) )
          continue;
        if ( !best || old_levels[get_node( f )] > old_levels[get_node( leaves[*best] )] )
          best = i;
      }
      if ( !best || leaves.size() + 1u > max_leaves )
        break;
      auto const m = get_node( leaves[*best] );
      leaves.erase( leaves.begin() + static_cast<std::ptrdiff_t>( *best ) );
      leaves.push_back( aig.fanin0( m ) );
      leaves.push_back( aig.fanin1( m ) );
    }
    std::vector<aig_signal> mapped;
    for ( auto f : leaves )
      mapped.push_back( rb.mapped( f ) );
    auto& r = rb.result();
    while ( mapped.size() > 1u )
    {
      std::stable_sort( mapped.begin(), mapped.end(), [&]( aig_signal x, aig_signal y ) { return rb.level( x ) < rb.level( y ); } );
      auto const combined = r.create_and( mapped[0], mapped[1] );
      mapped.erase( mapped.begin(), mapped.begin() + 2 );
      mapped.push_back( combined );
    }
    rb.set( n, mapped.front() );
  }
  return rb.finish();
}

aig_network xor_reexpress( aig_network const& aig, bool nand_form, std::mt19937_64& rng )
{
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    auto const f0 = aig.fanin0( n ), f1 = aig.fanin1( n );
    std::optional<aig_signal> alternative;
    if ( is_complemented( f0 ) && is_complemented( f1 ) && aig.is_and( get_node( f0 ) ) && aig.is_and( get_node( f1 ) ) )
    {
      auto const p = aig.fanin0( get_node( f0 ) ), q = aig.fanin1( get_node( f0 ) );
      auto const r0 = aig.fanin0( get_node( f1 ) ), s0 = aig.fanin1( get_node( f1 ) );
      bool const is_xor = ( r0 == operator_not( p ) && s0 == operator_not( q ) ) || ( r0 == operator_not( q ) && s0 == operator_not( p ) );
      if ( is_xor && ( rng() & 1u ) )
      {
        /* n = p XOR q */
        auto& r = rb.result();
        auto const a = rb.mapped( p ), b = rb.mapped( q );
        if ( nand_form )
        {
          auto const t = r.create_and( a, b );
          auto const u = r.create_and( a, operator_not( t ) );
          auto const v = r.create_and( b, operator_not( t ) );
          alternative = r.create_or( u, v );
        }
        else
        {
          auto const u = r.create_and( a, operator_not( b ) );
          auto const v = r.create_and( operator_not( a ), b );
          alternative = r.create_or( u, v );
        }
      }
    }
    rb.set( n, alternative ? *alternative : rb.copy( n ) );
  }
  return rb.finish();
}

aig_network random_resynthesis( aig_network const& aig, uint32_t slack, uint32_t cut_size, std::mt19937_64& rng )
{
  auto refs = aig.fanout_counts();
  auto const cuts = enumerate_cuts( aig, cut_size, 6u );
  rebuilder rb( aig );
  for ( aig_node n = aig.num_pis() + 1u; n < aig.size(); ++n )
  {
    std::vector<cut6 const*> usable;
    for ( auto const& c : cuts[n] )
      if ( c.size >= 2u )
        usable.push_back( &c );
    if ( usable.empty() || !coin( rng, 0.3 ) )
    {
      rb.set( n, rb.copy( n ) );
      continue;
    }
    auto const& c = *usable[rng() % usable.size()];
    std::span<aig_node const> const old_leaves( c.leaves.data(), c.size );
    auto const dag = synthesize_random( c.tt, rng );
    auto const cone = mffc( aig, refs, n, old_leaves );
    std::vector<aig_node> freed;
    for ( auto m : cone )
      if ( m != n && rb.result().is_and( get_node( rb.mapped_node( m ) ) ) )
        freed.push_back( get_node( rb.mapped_node( m ) ) );
    std::vector<aig_signal> leaves;
    for ( auto l : old_leaves )
      leaves.push_back( rb.mapped_node( l ) );
    auto const dr = dry_run( rb, dag, leaves, freed );
    if ( static_cast<int>( dr.added ) - static_cast<int>( cone.size() ) <= static_cast<int>( slack ) )
      rb.set( n, instantiate( rb.result(), dag, leaves ) );
    else
      rb.set( n, rb.copy( n ) );
  }
  return rb.finish();
}

} // namespace smpower::detail
