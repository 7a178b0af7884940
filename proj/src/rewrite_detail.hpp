#pragma once

/* shared machinery of the rewrite recipes; not part of the public interface */

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <smpower/aig.hpp>
#include <smpower/resynthesis.hpp>

namespace smpower::detail
{

/*! \brief Copies a network node by node in index order while allowing substitutions. */
class rebuilder
{
public:
  explicit rebuilder( aig_network const& old );

  aig_network const& old() const { return old_; }
  aig_network& result() { return result_; }

  aig_signal mapped( aig_signal old_signal ) const
  {
    return complement_if( map_[get_node( old_signal )], is_complemented( old_signal ) );
  }
  aig_signal mapped_node( aig_node n ) const { return map_[n]; }
  void set( aig_node old_node, aig_signal s ) { map_[old_node] = s; }

  /*! \brief The unmodified copy of an old AND node. */
  aig_signal copy( aig_node n );

  uint32_t level( aig_signal s );

  /*! \brief Outputs, then cleanup. */
  aig_network finish();

private:
  aig_network const& old_;
  aig_network result_;
  std::vector<aig_signal> map_;
  std::vector<uint32_t> levels_;
};

/*! \brief Maximum fan-out-free cone of `root` bounded by `leaves` (root included). */
std::vector<aig_node> mffc( aig_network const& aig, std::vector<uint32_t>& refs, aig_node root, std::span<aig_node const> leaves );

struct cut6
{
  uint8_t size = 0;
  std::array<aig_node, 6> leaves{};
  uint64_t tt = 0; /*!< over leaf positions, replicated to six variables */
};

/*! \brief Priority cuts of at most `k` leaves for every node (trivial cut last). */
std::vector<std::vector<cut6>> enumerate_cuts( aig_network const& aig, uint32_t k, uint32_t max_cuts );

/*! \brief Reconvergence-driven cut of at most `k` leaves, with the cone's node list. */
struct window
{
  std::vector<aig_node> leaves; /*!< sorted */
  std::vector<aig_node> cone;   /*!< AND nodes between leaves and root, ascending, root last */
};
window reconvergence_cut( aig_network const& aig, aig_node root, uint32_t k );

/*! \brief Truth tables over the window leaves for every cone node; index by node, other entries unspecified. */
void simulate_window( aig_network const& aig, window const& w, std::vector<uint64_t>& tts );

/*! \brief Cost of instantiating a small DAG into the rebuilt network without creating anything. */
struct dry_run_result
{
  uint32_t added = 0;        /*!< gates needing new (or otherwise freed) nodes */
  uint32_t level = 0;        /*!< level of the output */
  bool exists = false;       /*!< output already exists in the network */
  aig_signal existing = 0;   /*!< valid if `exists` */
};
dry_run_result dry_run( rebuilder& rb, small_dag const& dag, std::span<aig_signal const> leaves, std::span<aig_node const> freed );

/* recipe bodies */
aig_network cut_rewrite( aig_network const& aig, bool zero_gain, bool preserve_depth );
aig_network refactor( aig_network const& aig, bool zero_gain );
aig_network resubstitute( aig_network const& aig );
aig_network remove_redundancies( aig_network const& aig );

aig_network distribute( aig_network const& aig, double fraction, std::mt19937_64& rng );
aig_network shannon_expand( aig_network const& aig, uint32_t targets, std::mt19937_64& rng );
aig_network duplicate_fanouts( aig_network const& aig, uint32_t threshold, std::mt19937_64& rng );
aig_network rebalance_deeper( aig_network const& aig, bool random_order, std::mt19937_64& rng );
aig_network rebalance_shallower( aig_network const& aig );
aig_network xor_reexpress( aig_network const& aig, bool nand_form, std::mt19937_64& rng );
aig_network random_resynthesis( aig_network const& aig, uint32_t slack, uint32_t cut_size, std::mt19937_64& rng );

} // namespace smpower::detail
