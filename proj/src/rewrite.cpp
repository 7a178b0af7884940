#include <smpower/rewrite.hpp>

#include <array>

#include "rewrite_detail.hpp"

namespace smpower
{

namespace
{

constexpr std::array<recipe_info, num_recipes> catalogue = { {
    { 0, recipe_class::compression, "strash", "structural hashing with constant propagation and two-level simplification" },
    { 1, recipe_class::compression, "rewrite", "4-input cut rewriting, strictly positive gain" },
    { 2, recipe_class::compression, "rewrite-zero", "4-input cut rewriting, zero-gain moves allowed" },
    { 3, recipe_class::compression, "rewrite-depth", "4-input cut rewriting without increasing node levels" },
    { 4, recipe_class::compression, "refactor", "6-leaf reconvergence-driven cone collapse and resynthesis" },
    { 5, recipe_class::compression, "refactor-zero", "6-leaf cone resynthesis, zero-gain moves allowed" },
    { 6, recipe_class::compression, "resub0", "merging of functionally equivalent and constant nodes" },
    { 7, recipe_class::compression, "resub1", "windowed resubstitution by one existing divisor or an AND/OR of two" },
    { 8, recipe_class::compression, "balance", "size-aware balancing of AND supergates" },
    { 9, recipe_class::compression, "redundancy", "removal of redundant edges and nodes by exhaustive don't-care check" },
    { 10, recipe_class::decompression, "distribute-10", "De Morgan / distributive expansion on 10% of the nodes" },
    { 11, recipe_class::decompression, "distribute-25", "De Morgan / distributive expansion on 25% of the nodes" },
    { 12, recipe_class::decompression, "distribute-50", "De Morgan / distributive expansion on 50% of the nodes" },
    { 13, recipe_class::decompression, "shannon-1", "Shannon expansion of one node on a seed-chosen input" },
    { 14, recipe_class::decompression, "shannon-2", "Shannon expansion of two nodes on seed-chosen inputs" },
    { 15, recipe_class::decompression, "shannon-3", "Shannon expansion of three nodes on seed-chosen inputs" },
    { 16, recipe_class::decompression, "duplicate-2", "re-associated duplicates of nodes with at least 2 fan-outs" },
    { 17, recipe_class::decompression, "duplicate-3", "re-associated duplicates of nodes with at least 3 fan-outs" },
    { 18, recipe_class::decompression, "duplicate-4", "re-associated duplicates of nodes with at least 4 fan-outs" },
    { 19, recipe_class::decompression, "deepen-random", "AND supergates rebuilt as chains in random order" },
    { 20, recipe_class::decompression, "deepen-reversed", "AND supergates rebuilt as chains, latest signal first" },
    { 21, recipe_class::decompression, "flatten", "balancing through shared nodes, duplicating their logic" },
    { 22, recipe_class::decompression, "xor-swap", "XOR structures switched between their two AND/OR forms" },
    { 23, recipe_class::decompression, "xor-nand", "XOR structures rewritten into the four-NAND form" },
    { 24, recipe_class::decompression, "resyn-3-1", "randomized resynthesis of 3-input cuts, slack +1" },
    { 25, recipe_class::decompression, "resyn-3-2", "randomized resynthesis of 3-input cuts, slack +2" },
    { 26, recipe_class::decompression, "resyn-3-4", "randomized resynthesis of 3-input cuts, slack +4" },
    { 27, recipe_class::decompression, "resyn-4-1", "randomized resynthesis of 4-input cuts, slack +1" },
    { 28, recipe_class::decompression, "resyn-4-2", "randomized resynthesis of 4-input cuts, slack +2" },
    { 29, recipe_class::decompression, "resyn-4-4", "randomized resynthesis of 4-input cuts, slack +4" },
} };

uint64_t splitmix64( uint64_t x )
{
  x += 0x9e3779b97f4a7c15ull;
  x = ( x ^ ( x >> 30 ) ) * 0xbf58476d1ce4e5b9ull;
  x = ( x ^ ( x >> 27 ) ) * 0x94d049bb133111ebull;
  return x ^ ( x >> 31 );
}

} // namespace

std::span<recipe_info const> recipe_catalogue()
{
  return catalogue;
}

recipe_info const& recipe( uint32_t id )
{
  if ( id >= num_recipes )
    throw error( "unknown recipe id " + std::to_string( id ) );
  return catalogue[id];
}

aig_network apply_recipe( aig_network const& aig, uint32_t id, uint64_t step_seed )
{
  std::mt19937_64 rng( splitmix64( step_seed ^ ( uint64_t{ id } << 56 ) ) );
  constexpr std::array<uint32_t, 3> slacks = { 1u, 2u, 4u };
  switch ( recipe( id ).id )
  {
  case 0: return strash( aig );
  case 1: return detail::cut_rewrite( aig, false, false );
  case 2: return detail::cut_rewrite( aig, true, false );
  case 3: return detail::cut_rewrite( aig, false, true );
  case 4: return detail::refactor( aig, false );
  case 5: return detail::refactor( aig, true );
  case 6: return functional_reduction( aig );
  case 7: return detail::resubstitute( aig );
  case 8: return balance( aig );
  case 9: return detail::remove_redundancies( aig );
  case 10: return detail::distribute( aig, 0.10, rng );
  case 11: return detail::distribute( aig, 0.25, rng );
  case 12: return detail::distribute( aig, 0.50, rng );
  case 13: return detail::shannon_expand( aig, 1u, rng );
  case 14: return detail::shannon_expand( aig, 2u, rng );
  case 15: return detail::shannon_expand( aig, 3u, rng );
  case 16: return detail::duplicate_fanouts( aig, 2u, rng );
  case 17: return detail::duplicate_fanouts( aig, 3u, rng );
  case 18: return detail::duplicate_fanouts( aig, 4u, rng );
  case 19: return detail::rebalance_deeper( aig, true, rng );
  case 20: return detail::rebalance_deeper( aig, false, rng );
  case 21: return detail::rebalance_shallower( aig );
  case 22: return detail::xor_reexpress( aig, false, rng );
  case 23: return detail::xor_reexpress( aig, true, rng );
  default: return detail::random_resynthesis( aig, slacks[( id - 24u ) % 3u], id < 27u ? 3u : 4u, rng );
  }
}

} // namespace smpower
