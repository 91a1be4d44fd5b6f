#pragma once

// The solver's two working structures, kept in one object:
//
//  - circuit truth table (CTT): one block of truth-table rows per gate over
//    the n+m variable columns. AND/OR blocks have 4 rows, NOT blocks 2, so
//    there are at most 4m rows. Rows are tombstoned, never removed: row ids
//    stay stable for traces and snapshots.
//  - degree table (DT): per gate, the set of its live row ids, stored as a
//    bitmask over the block. degree(G) = live-row count; a gate reaching
//    degree 0 is a contradiction.
//
// Within a block, rows are enumerated in ascending binary order of the
// gate's variables sorted by column order (x1..xn, y1..ym) with the first
// variable as the most significant bit; the gate output column always sorts
// last. Assigning v := b kills every live row carrying the opposite bit in
// any block where v occurs.
//
// A Tables instance is single-owner mutable; distinct instances are
// independent.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csat/circuit.hpp"

namespace csat {

struct TableCell {
  uint32_t var;  // dense ordinal (Circuit::var_ord)
  uint8_t bit;
};

struct CttRow {
  uint32_t id;    // 1-based, global, stable
  uint32_t gate;  // owner 1..m
  std::array<TableCell, 3> cells;  // sorted by var ordinal; output last
  uint8_t cell_count;
};

struct RowBit {
  uint32_t row;
  uint8_t bit;
};

// Outcome of one assign(): which rows died and whose degrees moved.
struct DeletionReport {
  Var var{};
  uint8_t bit = 0;
  std::vector<uint32_t> deleted_rows;    // ascending
  std::vector<uint32_t> degree_changed;  // gate ids, first-touch order
  std::optional<uint32_t> contradiction_gate;  // degree hit 0 here
  bool no_op = false;  // var was already bound to bit
};

struct TablesSnapshot {
  std::vector<uint8_t> masks;
  std::vector<int8_t> values;
  uint32_t assigned_inputs = 0;
  uint64_t owner_uid = 0;
};

struct ForeignSnapshot : std::logic_error {
  ForeignSnapshot() : std::logic_error("snapshot belongs to another table") {}
};

class Tables {
 public:
  explicit Tables(Circuit c);  // keeps its own copy of the circuit

  const Circuit& circuit() const { return circuit_; }

  // CTT
  uint32_t row_count() const { return uint32_t(rows_.size()); }
  const CttRow& row(uint32_t row_id) const { return rows_[row_id - 1]; }
  bool row_live(uint32_t row_id) const;
  uint32_t block_first(uint32_t gate) const { return block_first_[gate]; }
  uint32_t block_size(uint32_t gate) const;
  std::span<const RowBit> occurrences(Var v) const;

  // DT
  int degree(uint32_t gate) const;
  std::vector<uint32_t> live_rows(uint32_t gate) const;
  std::optional<uint32_t> sole_live_row(uint32_t gate) const;
  uint64_t live_total() const;

  // partial assignment
  std::optional<uint8_t> value(Var v) const;
  bool assigned(Var v) const { return values_[circuit_.var_ord(v)] >= 0; }
  uint32_t assigned_input_count() const { return assigned_inputs_; }
  Assignment assignment() const;

  // Binds v := bit and kills every live row where v carries !bit.
  // Re-assigning the same bit is a no-op; the opposite bit throws
  // ConflictingAssignment. A block emptied by the deletions is reported as
  // contradiction_gate (deletions are still carried out in full).
  DeletionReport assign(Var v, uint8_t bit);

  TablesSnapshot snapshot() const;
  void restore(const TablesSnapshot& s);  // bit-exact; throws ForeignSnapshot

  // One line per live row "row <id> G<j> <var>=<bit> ..." in row order, then
  // one line per gate "deg G<j> = {ids}". Stable; fixture-tested.
  std::string dump() const;

 private:
  Circuit circuit_;
  std::vector<CttRow> rows_;
  std::vector<uint32_t> block_first_;        // [1..m], plus [m+1] = end

  std::vector<std::vector<RowBit>> occ_;     // per var ordinal, static
  std::vector<uint8_t> masks_;               // per gate, bit i = row alive
  std::vector<int8_t> values_;               // per var ordinal, -1 = unset
  uint32_t assigned_inputs_ = 0;
  uint64_t uid_;
};

// Test hook: DT mask vs. a linear scan disagree only on corruption.
bool tables_coherent(const Tables& t);

}  // namespace csat
