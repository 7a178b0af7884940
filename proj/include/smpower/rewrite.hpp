#pragma once

/*!
  \file rewrite.hpp
  \brief The catalogue of 30 function-preserving AIG rewrite recipes

  Ids 0..9 are compression recipes (they aim to reduce the AND count), ids
  10..29 are decompression recipes (they restructure and usually grow the
  graph so that a random walk can leave local optima). Every recipe returns a
  new, cleaned-up network and is a pure function of (network, id, seed).
*/

#include <array>
#include <cstdint>
#include <span>
#include <string_view>

#include <smpower/aig.hpp>

namespace smpower
{

enum class recipe_class : uint8_t
{
  compression,
  decompression
};

struct recipe_info
{
  uint32_t id;
  recipe_class kind;
  std::string_view name;
  std::string_view description;
};

constexpr uint32_t num_recipes = 30u;
constexpr uint32_t num_compression_recipes = 10u;

std::span<recipe_info const> recipe_catalogue();

/*! \brief Throws `error` for ids outside 0..29. */
recipe_info const& recipe( uint32_t id );

inline bool is_compression( uint32_t id ) { return id < num_compression_recipes; }

aig_network apply_recipe( aig_network const& aig, uint32_t id, uint64_t step_seed );

/* individual transformations, also used by the tests */

/*! \brief Structural hashing with constant propagation and two-level simplification. */
aig_network strash( aig_network const& aig );

/*! \brief Merges nodes with equal or complementary global functions (at most 16 inputs). */
aig_network functional_reduction( aig_network const& aig );

/*! \brief Size-aware tree balancing of AND supergates. */
aig_network balance( aig_network const& aig );

} // namespace smpower
