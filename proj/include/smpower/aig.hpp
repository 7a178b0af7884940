#pragma once

/*!
  \file aig.hpp
  \brief And-inverter graphs with structural hashing

  Node 0 is the constant-0 node, followed by the primary inputs and then the
  AND nodes. Fan-ins of an AND node always have smaller indices, so index
  order is a topological order. A signal is a literal `2 * node + complement`.
*/

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <smpower/formats.hpp>

namespace smpower
{

using aig_signal = uint32_t;
using aig_node = uint32_t;

constexpr aig_signal aig_const0 = 0u;
constexpr aig_signal aig_const1 = 1u;

constexpr aig_signal make_signal( aig_node n, bool complemented = false )
{
  return ( n << 1 ) | ( complemented ? 1u : 0u );
}
constexpr aig_node get_node( aig_signal s ) { return s >> 1; }
constexpr bool is_complemented( aig_signal s ) { return ( s & 1u ) != 0u; }
constexpr aig_signal operator_not( aig_signal s ) { return s ^ 1u; }
constexpr aig_signal complement_if( aig_signal s, bool c ) { return s ^ ( c ? 1u : 0u ); }

class aig_network
{
public:
  aig_network();

  /* construction */
  aig_signal get_constant( bool value ) const { return value ? aig_const1 : aig_const0; }
  aig_signal create_pi( std::string name = {} );
  void create_po( aig_signal f, std::string name = {} );

  /*! \brief Hashed AND with trivial simplifications (constants, a & a, a & !a). */
  aig_signal create_and( aig_signal a, aig_signal b );
  aig_signal create_nand( aig_signal a, aig_signal b ) { return operator_not( create_and( a, b ) ); }
  aig_signal create_or( aig_signal a, aig_signal b );
  aig_signal create_nor( aig_signal a, aig_signal b ) { return create_and( operator_not( a ), operator_not( b ) ); }
  aig_signal create_xor( aig_signal a, aig_signal b );
  aig_signal create_xnor( aig_signal a, aig_signal b ) { return operator_not( create_xor( a, b ) ); }
  /*! \brief `sel ? then_ : else_` */
  aig_signal create_mux( aig_signal sel, aig_signal then_, aig_signal else_ );
  aig_signal create_maj( aig_signal a, aig_signal b, aig_signal c );

  /*! \brief The literal `create_and` would return, if it exists without creating a node. */
  std::optional<aig_signal> find_and( aig_signal a, aig_signal b ) const;

  /* structure */
  uint32_t size() const { return static_cast<uint32_t>( fanins_.size() ); }
  uint32_t num_pis() const { return static_cast<uint32_t>( pi_names_.size() ); }
  uint32_t num_pos() const { return static_cast<uint32_t>( pos_.size() ); }
  uint32_t num_gates() const { return size() - 1u - num_pis(); }

  bool is_constant( aig_node n ) const { return n == 0u; }
  bool is_pi( aig_node n ) const { return n >= 1u && n <= num_pis(); }
  bool is_and( aig_node n ) const { return n > num_pis() && n < size(); }
  aig_node pi_at( uint32_t index ) const { return index + 1u; }
  uint32_t pi_index( aig_node n ) const { return n - 1u; }

  aig_signal fanin0( aig_node n ) const { return fanins_[n][0]; }
  aig_signal fanin1( aig_node n ) const { return fanins_[n][1]; }

  std::vector<aig_signal> const& pos() const { return pos_; }
  aig_signal po_at( uint32_t index ) const { return pos_[index]; }
  void set_po( uint32_t index, aig_signal f ) { pos_[index] = f; }
  std::vector<std::string> const& pi_names() const { return pi_names_; }
  std::vector<std::string> const& po_names() const { return po_names_; }

  std::string const& name() const { return name_; }
  void set_name( std::string name ) { name_ = std::move( name ); }

  /*! \brief Number of AND fan-outs plus PO references per node. */
  std::vector<uint32_t> fanout_counts() const;

  /*! \brief Level per node: PIs and the constant are 0. */
  std::vector<uint32_t> levels() const;
  uint32_t depth() const;

  /*! \brief Nodes not reachable from an output removed; equal networks compare structurally. */
  aig_network cleanup() const;

  friend bool operator==( aig_network const& a, aig_network const& b );

private:
  std::string name_{ "top" };
  std::vector<std::array<aig_signal, 2>> fanins_;
  std::vector<aig_signal> pos_;
  std::vector<std::string> pi_names_;
  std::vector<std::string> po_names_;
  std::unordered_map<uint64_t, aig_node> strash_;
};

/*! \brief Copies the interface (name, PI names) of `from` into an empty network. */
aig_network copy_interface( aig_network const& from, std::vector<aig_signal>& old_to_new );

/*! \brief Exhaustive truth tables of all nodes, limited to 16 primary inputs.

  Entry `node * words() + i` holds patterns [64 i, 64 i + 64); the pattern index
  packs PI k at bit k.
*/
class aig_simulation
{
public:
  static constexpr uint32_t max_inputs = 16u;

  explicit aig_simulation( aig_network const& aig );

  uint32_t words() const { return words_; }
  std::span<uint64_t const> node( aig_node n ) const { return { data_.data() + static_cast<size_t>( n ) * words_, words_ }; }
  /*! \brief Truth table of a signal, complemented as required; bits beyond 2^n patterns are zero. */
  std::vector<uint64_t> signal( aig_signal s ) const;

private:
  uint32_t words_;
  uint32_t num_pis_;
  std::vector<uint64_t> data_;
};

/*! \brief Exhaustive functional comparison (up to 20 inputs).

  Throws `error` on PI/PO arity mismatch and `unsupported_error` above 20 inputs.
*/
bool check_equivalence( aig_network const& a, aig_network const& b );

/*! \brief Output values for one input pattern (PI k at bit k). */
std::vector<bool> simulate_pattern( aig_network const& aig, uint64_t pattern );

/*! \brief Line-oriented dump: `PI id name`, `id AND l r` with `+`/`-` complement marks, `OUT name lit`. */
std::string to_text( aig_network const& aig );

class unsupported_error : public error
{
public:
  using error::error;
};

} // namespace smpower
