#pragma once

/*!
  \file generators.hpp
  \brief Structural encoder and multiplier generators with exhaustive verification

  Port conventions: encoders read `x[0..w-1]` and drive `y[0..w-1]`;
  multipliers read `a[0..w-1]`, `b[0..w-1]` and drive `p[0..2w-1]`.
  Input port i of a multiplier is bit i of the packed pattern `a | b << w`.
*/

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <smpower/formats.hpp>
#include <smpower/netlist.hpp>

namespace smpower
{

enum class block_kind : uint8_t
{
  enc_tc_sm,
  enc_tc_sme,
  enc_tcs_sm,
  mul_tc_tc,
  mul_sm_tc,
  mul_sme_tc,
  mul_sm_sm
};

constexpr std::array<block_kind, 7> all_blocks{ block_kind::enc_tc_sm,  block_kind::enc_tc_sme, block_kind::enc_tcs_sm,
                                                block_kind::mul_tc_tc,  block_kind::mul_sm_tc,  block_kind::mul_sme_tc,
                                                block_kind::mul_sm_sm };

struct block_spec
{
  block_kind block = block_kind::mul_tc_tc;
  uint32_t width = 4u;
};

/*! \brief Static description of a block's interface. */
struct block_info
{
  std::string_view name;  /*!< CLI spelling, e.g. "mul-sm-tc" */
  std::string_view label; /*!< e.g. "SM->TC" */
  bool is_encoder;
  format input_format;
  format output_format;
  bool clips; /*!< only the TC->SM encoder */
};

block_info const& info( block_kind block );
std::optional<block_kind> block_from_string( std::string_view name );

inline uint32_t num_operands( block_kind block ) { return info( block ).is_encoder ? 1u : 2u; }
inline uint32_t num_input_bits( block_spec const& spec ) { return num_operands( spec.block ) * spec.width; }
inline uint32_t num_output_bits( block_spec const& spec )
{
  return info( spec.block ).is_encoder ? spec.width : 2u * spec.width;
}

/*! \brief Range of operand values the block accepts. */
value_range operand_range( block_spec const& spec );

cell_netlist build_encoder( block_spec const& spec );
cell_netlist build_multiplier( block_spec const& spec );

/*! \brief Dispatches to `build_encoder` or `build_multiplier`. */
cell_netlist build_block( block_spec const& spec );

/*! \brief Expected output pattern for legal operand values (golden model). */
bit_word golden_output( block_spec const& spec, std::vector<int64_t> const& operands );

struct counterexample
{
  std::vector<int64_t> operands;
  uint64_t input_pattern = 0;
  bit_word expected;
  bit_word actual;

  std::string describe() const;
};

struct verification_result
{
  uint64_t checked = 0;
  uint64_t passed = 0;
  std::optional<counterexample> failure;

  bool ok() const { return !failure.has_value(); }
};

/*! \brief Compares `n` with the golden model on every legal input.

  Throws `error` when the port counts do not match `spec`.
*/
verification_result verify_exhaustive( cell_netlist const& n, block_spec const& spec );

} // namespace smpower
