#pragma once

/*!
  \file mapping.hpp
  \brief Translation between cell netlists and and-inverter graphs

  `to_aig` expands every cell into AND nodes with complemented edges.
  `from_aig` covers the graph with library cells: every node is matched
  against cuts of up to three leaves, so XOR2/XNOR2/MUX2/MAJ3 and the
  inverting two-input gates are recovered wherever they are cheaper, with
  NOT cells inserted only where a polarity cannot be absorbed.
*/

#include <smpower/aig.hpp>
#include <smpower/netlist.hpp>

namespace smpower
{

/*! \brief Function-preserving AND/INV expansion; PI and PO names follow the netlist's port wires. */
aig_network to_aig( cell_netlist const& n );

/*! \brief Cut-based technology mapping to the fixed cell library.

  The result is never more expensive (in transistors) than `naive_expansion`.
*/
cell_netlist from_aig( aig_network const& aig );

/*! \brief One AND2 per node and one NOT per complemented edge source. */
cell_netlist naive_expansion( aig_network const& aig );

} // namespace smpower
