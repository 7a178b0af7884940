#include <smpower/sim.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace smpower
{

namespace
{

class normal_source
{
public:
  explicit normal_source( uint64_t seed )
      : rng_( seed )
  {
  }

  double next()
  {
    if ( has_spare_ )
    {
      has_spare_ = false;
      return spare_;
    }
    /* u1 in (0, 1], u2 in [0, 1) */
    double const u1 = 1.0 - uniform();
    double const u2 = uniform();
    double const radius = std::sqrt( -2.0 * std::log( u1 ) );
    double const angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin( angle );
    has_spare_ = true;
    return radius * std::cos( angle );
  }

private:
  double uniform() { return static_cast<double>( rng_() >> 11 ) * 0x1.0p-53; }

  std::mt19937_64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace

void stimulus_spec::validate() const
{
  if ( !( sigma > 0.0 ) )
    throw error( "sigma must be positive" );
  if ( cycles < 2u )
    throw error( "at least two cycles are needed" );
  if ( operands == 0u )
    throw error( "at least one operand is needed" );
  if ( range.lo > range.hi )
    throw error( "empty stimulus range" );
  auto const legal = representable_range( encoding, width );
  if ( range.lo < legal.lo || range.hi > legal.hi )
    throw error( "stimulus range exceeds the " + std::string( to_string( encoding ) ) + " range at width " +
                 std::to_string( width ) );
  if ( operands * width > 64u )
    throw error( "at most 64 input bits are supported" );
}

std::vector<int64_t> sample_stimuli( stimulus_spec const& spec )
{
  spec.validate();
  normal_source normal( spec.seed );
  std::vector<int64_t> values( static_cast<size_t>( spec.cycles ) * spec.operands );
  for ( auto& v : values )
  {
    double const x = std::round( spec.mu + spec.sigma * normal.next() );
    v = static_cast<int64_t>( std::clamp( x, static_cast<double>( spec.range.lo ), static_cast<double>( spec.range.hi ) ) );
  }
  return values;
}

std::vector<uint64_t> encode_stimuli( stimulus_spec const& spec, std::span<int64_t const> values )
{
  if ( values.size() % spec.operands != 0u )
    throw error( "value count is not a multiple of the operand count" );
  std::vector<uint64_t> patterns( values.size() / spec.operands );
  for ( size_t t = 0; t < patterns.size(); ++t )
  {
    uint64_t p = 0;
    for ( uint32_t k = 0; k < spec.operands; ++k )
      p |= encode( values[t * spec.operands + k], spec.encoding, spec.width ).bits() << ( k * spec.width );
    patterns[t] = p;
  }
  return patterns;
}

std::vector<uint64_t> stimulus_patterns( stimulus_spec const& spec )
{
  auto const values = sample_stimuli( spec );
  return encode_stimuli( spec, values );
}

sim_trace simulate_toggles( cell_netlist const& n, std::span<uint64_t const> patterns )
{
  if ( patterns.size() < 2u )
    throw error( "simulation needs at least two cycles" );
  if ( n.inputs().size() > 64u )
    throw error( "simulation supports at most 64 inputs" );

  auto const order = n.topological_order();
  auto const num_wires = n.num_wires();
  sim_trace trace;
  trace.cycles = static_cast<uint32_t>( patterns.size() );
  trace.toggles.assign( num_wires, 0u );

  std::vector<uint64_t> values( num_wires, 0u );
  std::vector<uint64_t> last_bit( num_wires, 0u );
  std::array<uint64_t, 3> in{};

  size_t const blocks = ( patterns.size() + 63u ) / 64u;
  for ( size_t blk = 0; blk < blocks; ++blk )
  {
    size_t const base = blk * 64u;
    size_t const count = std::min<size_t>( 64u, patterns.size() - base );
    uint64_t const valid = count == 64u ? ~uint64_t{ 0 } : ( uint64_t{ 1 } << count ) - 1u;

    /* transpose: bit t of the word of input i is the value of input i at cycle base + t */
    for ( size_t i = 0; i < n.inputs().size(); ++i )
    {
      uint64_t word = 0;
      for ( size_t t = 0; t < count; ++t )
        word |= ( ( patterns[base + t] >> i ) & 1u ) << t;
      values[n.inputs()[i]] = word;
    }
    for ( auto c : order )
    {
      auto const& cl = n.cells()[c];
      for ( size_t k = 0; k < cl.inputs.size(); ++k )
        in[k] = values[cl.inputs[k]];
      values[cl.output] = evaluate_cell( cl.kind, std::span<uint64_t const>( in.data(), cl.inputs.size() ) );
    }

    /* cycle 0 establishes the initial state */
    uint64_t const mask = blk == 0u ? valid & ~uint64_t{ 1 } : valid;
    for ( wire_id w = 0; w < num_wires; ++w )
    {
      uint64_t const v = values[w] & valid;
      uint64_t const previous = ( v << 1 ) | last_bit[w];
      trace.toggles[w] += static_cast<uint64_t>( std::popcount( ( v ^ previous ) & mask ) );
      last_bit[w] = ( v >> ( count - 1u ) ) & 1u;
    }
  }
  return trace;
}

double swact( cell_netlist const& n, std::span<uint64_t const> patterns )
{
  auto const trace = simulate_toggles( n, patterns );
  auto const costs = fanout_costs( n );
  uint64_t weighted = 0;
  for ( wire_id w = 0; w < n.num_wires(); ++w )
    weighted += trace.toggles[w] * costs[w];
  return static_cast<double>( weighted ) / static_cast<double>( trace.cycles - 1u );
}

swact_report swact( cell_netlist const& n, stimulus_spec const& spec )
{
  spec.validate();
  if ( n.inputs().size() != static_cast<size_t>( spec.operands ) * spec.width )
  {
    throw error( "netlist has " + std::to_string( n.inputs().size() ) + " inputs, stimulus provides " +
                 std::to_string( spec.operands ) + " x " + std::to_string( spec.width ) );
  }
  auto const patterns = stimulus_patterns( spec );
  swact_report report;
  report.s = swact( n, patterns );
  report.sigma = spec.sigma;
  report.cycles = spec.cycles;
  report.seed = spec.seed;
  return report;
}

swact_report config_swact( std::optional<swact_report> const& enc, swact_report const& mult )
{
  swact_report total = mult;
  double const s_enc = enc ? enc->s : 0.0;
  if ( enc && ( enc->sigma != mult.sigma || enc->cycles != mult.cycles ) )
  {
    throw error( "encoder and multiplier reports use different sigma or cycle counts" );
  }
  total.s_enc = s_enc;
  total.s_mult = mult.s;
  total.s = 2.0 * s_enc + mult.s;
  return total;
}

std::string toggle_table_csv( cell_netlist const& n, sim_trace const& trace )
{
  auto const costs = fanout_costs( n );
  std::ostringstream os;
  os << "wire,toggles,fanout_cost,weighted\n";
  for ( wire_id w = 0; w < n.num_wires(); ++w )
    os << n.wire_name( w ) << ',' << trace.toggles[w] << ',' << costs[w] << ',' << trace.toggles[w] * costs[w] << '\n';
  return os.str();
}

value_histogram_result value_histogram( stimulus_spec const& spec, binary_model const& through )
{
  auto const values = sample_stimuli( spec );
  value_histogram_result result;
  for ( auto v : values )
    ++result.inputs[v];
  if ( through && spec.operands == 2u )
  {
    for ( size_t t = 0; t < spec.cycles; ++t )
      ++result.outputs[through( values[2 * t], values[2 * t + 1] )];
  }
  return result;
}

std::string histogram_csv( std::map<int64_t, uint64_t> const& histogram )
{
  std::ostringstream os;
  os << "value,count\n";
  for ( auto const& [value, count] : histogram )
    os << value << ',' << count << '\n';
  return os.str();
}

} // namespace smpower
