#pragma once

/*!
  \file formats.hpp
  \brief Signed fixed-point representations (TC, TCS, SM, SME) and golden models

  Bit patterns are stored LSB-first; every text rendering is MSB-first.
*/

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smpower
{

/*! \brief Base class of all errors raised by this library. */
class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class invalid_width_error : public error
{
public:
  using error::error;
};

class range_error : public error
{
public:
  using error::error;
};

class illegal_encoding_error : public error
{
public:
  using error::error;
};

enum class format : uint8_t
{
  tc,  /*!< two's complement */
  tcs, /*!< two's complement, symmetric range (most negative pattern illegal) */
  sm,  /*!< sign-magnitude, no negative zero */
  sme  /*!< sign-magnitude, negative-zero pattern reassigned to the most negative value */
};

std::string_view to_string( format f );

/*! \brief Parses "TC", "TCS", "SM", "SME" (case-insensitive). Throws `error` otherwise. */
format format_from_string( std::string_view name );

struct value_range
{
  int64_t lo = 0;
  int64_t hi = 0;

  bool contains( int64_t v ) const { return v >= lo && v <= hi; }
  uint64_t size() const { return static_cast<uint64_t>( hi - lo + 1 ); }
  auto operator<=>( value_range const& ) const = default;
};

/*! \brief A fixed-width bit pattern (at most 64 bits), LSB-first. */
class bit_word
{
public:
  bit_word() = default;
  bit_word( uint64_t bits, uint32_t width );

  /*! \brief Parses an MSB-first string of '0'/'1' characters, e.g. "1011". */
  static bit_word from_string( std::string_view msb_first );

  bool operator[]( uint32_t i ) const { return ( bits_ >> i ) & 1u; }
  uint64_t bits() const { return bits_; }
  uint32_t width() const { return width_; }

  /*! \brief MSB-first rendering, e.g. "101". */
  std::string to_string() const;

  auto operator<=>( bit_word const& ) const = default;

private:
  uint64_t bits_ = 0;
  uint32_t width_ = 0;
};

constexpr uint32_t min_width = 2u;
constexpr uint32_t max_width = 32u;

value_range representable_range( format f, uint32_t width );

/*! \brief Unique bit pattern of `value`; throws `range_error` when it is not representable. */
bit_word encode( int64_t value, format f, uint32_t width );

/*! \brief True iff `word` denotes a value in `f` (exactly one pattern is illegal for TCS and SM). */
bool is_legal( bit_word word, format f );

int64_t decode( bit_word word, format f );

/*! \brief Value-preserving conversion between formats of the same width.

  With `clip` set, the most negative value is mapped to the most negative
  value of the symmetric range when the target format (SM, TCS) lacks it.
*/
bit_word ref_convert( bit_word word, format from, format to, bool clip );

/*! \brief Exact product of two `width`-bit two's complement operands. */
int64_t ref_multiply( int64_t a, int64_t b, uint32_t width );

} // namespace smpower
