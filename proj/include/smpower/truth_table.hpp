#pragma once

/*!
  \file truth_table.hpp
  \brief Truth tables of up to six variables stored in one 64-bit word

  Bit `i` holds the function value for the assignment whose variable `v`
  equals bit `v` of `i`. Functions of fewer variables are replicated, so a
  table never depends on variables outside its support.
*/

#include <array>
#include <bit>
#include <cstdint>

namespace smpower::tt6
{

constexpr std::array<uint64_t, 6> projections = { 0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
                                                  0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull };

constexpr uint64_t var( uint32_t v ) { return projections[v]; }

constexpr uint64_t cofactor0( uint64_t tt, uint32_t v )
{
  uint32_t const shift = 1u << v;
  uint64_t const low = tt & ~projections[v];
  return low | ( low << shift );
}

constexpr uint64_t cofactor1( uint64_t tt, uint32_t v )
{
  uint32_t const shift = 1u << v;
  uint64_t const high = tt & projections[v];
  return high | ( high >> shift );
}

constexpr bool has_var( uint64_t tt, uint32_t v ) { return cofactor0( tt, v ) != cofactor1( tt, v ); }

constexpr uint32_t support( uint64_t tt )
{
  uint32_t mask = 0;
  for ( uint32_t v = 0; v < 6u; ++v )
    if ( has_var( tt, v ) )
      mask |= 1u << v;
  return mask;
}

/*! \brief Replicates the low 2^k bits over the whole word. */
constexpr uint64_t extend( uint64_t tt, uint32_t num_vars )
{
  for ( uint32_t k = num_vars; k < 6u; ++k )
  {
    uint32_t const shift = 1u << k;
    uint64_t const mask = ( uint64_t{ 1 } << shift ) - 1u;
    tt = ( tt & mask ) | ( ( tt & mask ) << shift );
  }
  return tt;
}

/*! \brief Existential quantification of variable v. */
constexpr uint64_t exists( uint64_t tt, uint32_t v ) { return cofactor0( tt, v ) | cofactor1( tt, v ); }

constexpr int popcount( uint64_t tt ) { return std::popcount( tt ); }

} // namespace smpower::tt6
