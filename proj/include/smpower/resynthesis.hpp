#pragma once

/*!
  \file resynthesis.hpp
  \brief AND-inverter structures for functions of up to six variables

  `synthesize` returns a compact structure found by a memoized search over
  single-variable, disjoint-support, Shannon, and factored-ISOP
  decompositions. It is a heuristic: sizes are small but not proven minimal.
*/

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <unordered_map>
#include <vector>

#include <smpower/aig.hpp>

namespace smpower
{

/*! \brief A small AND graph over six leaves.

  Literal `2 * i + c` refers to index i: 0 is the constant, 1..6 are the leaves,
  7 and above are gates in creation order.
*/
struct small_dag
{
  static constexpr uint32_t first_gate = 7u;

  std::vector<std::array<uint32_t, 2>> gates;
  uint32_t output = 0;

  uint32_t num_gates() const { return static_cast<uint32_t>( gates.size() ); }
  /*! \brief Function over the six leaves. */
  uint64_t simulate() const;
};

constexpr uint32_t dag_leaf( uint32_t index ) { return 2u * ( 1u + index ); }

/*! \brief Builds small DAGs with local structural hashing. */
class dag_builder
{
public:
  uint32_t create_and( uint32_t a, uint32_t b );
  uint32_t create_or( uint32_t a, uint32_t b ) { return create_and( a ^ 1u, b ^ 1u ) ^ 1u; }
  uint32_t create_xor( uint32_t a, uint32_t b );
  uint32_t create_mux( uint32_t sel, uint32_t then_, uint32_t else_ );
  /*! \brief Copies `dag` with its leaves substituted by `leaves`. */
  uint32_t import( small_dag const& dag, std::span<uint32_t const, 6> leaves );
  uint32_t import( small_dag const& dag );

  small_dag finish( uint32_t output ) &&;
  uint32_t num_gates() const { return static_cast<uint32_t>( gates_.size() ); }

private:
  std::vector<std::array<uint32_t, 2>> gates_;
  std::unordered_map<uint64_t, uint32_t> strash_;
};

/*! \brief Memoized compact structure for a six-variable truth table (per thread). */
small_dag const& synthesize( uint64_t tt );

/*! \brief A randomized, usually larger, structure for the same function. */
small_dag synthesize_random( uint64_t tt, std::mt19937_64& rng );

/*! \brief Instantiates a DAG into an AIG; unused leaves may be `aig_const0`. */
aig_signal instantiate( aig_network& aig, small_dag const& dag, std::span<aig_signal const> leaves );

} // namespace smpower
