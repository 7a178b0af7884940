#pragma once

/*!
  \file netlist.hpp
  \brief Combinational cell netlists over a fixed technology-independent library

  A netlist is a set of named wires, each driven by exactly one input port or
  one cell. Output ports reference wires by position; the same wire may be
  listed more than once and an input wire may be listed as an output.
*/

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <smpower/formats.hpp>

namespace smpower
{

enum class cell_kind : uint8_t
{
  const0,
  const1,
  buf,
  inv,
  and2,
  nand2,
  or2,
  nor2,
  xor2,
  xnor2,
  mux2, /*!< inputs (a, b, select): select ? b : a */
  maj3
};

constexpr uint32_t num_cell_kinds = 12u;

/*! \brief Library name, e.g. "NAND2"; the inverter is named "NOT". */
std::string_view to_string( cell_kind kind );
std::optional<cell_kind> cell_kind_from_string( std::string_view name );

uint32_t transistor_cost( cell_kind kind );
uint32_t arity( cell_kind kind );

/*! \brief Evaluates a cell on 64 independent input vectors at once. */
uint64_t evaluate_cell( cell_kind kind, std::span<uint64_t const> inputs );

/*! \brief Hash of the transistor cost table, embedded into report manifests. */
uint64_t cost_table_hash();

using wire_id = uint32_t;

struct cell
{
  std::string id;
  cell_kind kind;
  std::vector<wire_id> inputs;
  wire_id output;
};

struct validation_issue
{
  std::string kind; /*!< "cycle", "arity", "driver", "undriven-output", "unknown-wire" */
  std::string message;
};

class cell_netlist
{
public:
  explicit cell_netlist( std::string name = "top" );

  std::string const& name() const { return name_; }
  void set_name( std::string name ) { name_ = std::move( name ); }

  /*! \brief Creates an undriven wire. Throws if the name is taken. */
  wire_id add_wire( std::string name );
  wire_id add_input( std::string name );
  void add_output( wire_id wire );

  /*! \brief Adds a cell driving a fresh wire (auto-named when `output_name` is empty). */
  wire_id add_cell( cell_kind kind, std::vector<wire_id> inputs, std::string output_name = {} );

  /*! \brief Adds a cell driving an existing wire; performs no checks (see `validate`). */
  void add_cell_raw( cell_kind kind, std::vector<wire_id> inputs, wire_id output, std::string id = {} );

  /*! \brief Renames a wire. Throws if the new name is taken. */
  void rename_wire( wire_id wire, std::string name );

  uint32_t num_wires() const { return static_cast<uint32_t>( wire_names_.size() ); }
  std::string const& wire_name( wire_id wire ) const { return wire_names_.at( wire ); }
  std::optional<wire_id> find_wire( std::string_view name ) const;

  std::vector<wire_id> const& inputs() const { return inputs_; }
  std::vector<wire_id> const& outputs() const { return outputs_; }
  std::vector<cell> const& cells() const { return cells_; }
  uint32_t cell_count() const { return static_cast<uint32_t>( cells_.size() ); }

  /*! \brief Checks the DAG property, the single-driver rule, arities and driven outputs. */
  std::vector<validation_issue> validate() const;

  /*! \brief Cell indices in topological order. Throws `error` on a combinational loop. */
  std::vector<uint32_t> topological_order() const;

  /*! \brief For every wire, the indices of the cells reading it. */
  std::vector<std::vector<uint32_t>> readers() const;

private:
  std::string name_;
  std::vector<std::string> wire_names_;
  std::unordered_map<std::string, wire_id> wire_index_;
  std::vector<wire_id> inputs_;
  std::vector<wire_id> outputs_;
  std::vector<cell> cells_;
};

struct metrics_report
{
  uint32_t cell_count = 0;
  uint64_t transistors = 0;
  uint32_t depth = 0;
};

uint64_t transistor_count( cell_netlist const& n );

/*! \brief Maximum number of cells on any input-port to output-port path. */
uint32_t depth( cell_netlist const& n );

metrics_report measure( cell_netlist const& n );

struct evaluation_result
{
  std::vector<bool> outputs;     /*!< one entry per output port */
  std::vector<bool> wire_values; /*!< one entry per wire */

  /*! \brief Output ports packed into a word, port 0 is the LSB. */
  bit_word output_word() const;
};

/*! \brief Zero-delay evaluation; `inputs` must assign every input port. */
evaluation_result evaluate( cell_netlist const& n, std::span<bool const> inputs );

/*! \brief Same as above, input port i takes bit i of `pattern`. */
evaluation_result evaluate( cell_netlist const& n, uint64_t pattern );

/*! \brief Sum of transistor costs of all cells reading `wire`. */
uint64_t fanout_cost( cell_netlist const& n, wire_id wire );
uint64_t fanout_cost( cell_netlist const& n, std::string_view wire );

/*! \brief `fanout_cost` for every wire. */
std::vector<uint64_t> fanout_costs( cell_netlist const& n );

} // namespace smpower
