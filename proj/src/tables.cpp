#include "csat/tables.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <sstream>

namespace csat {

static std::atomic<uint64_t> g_tables_uid{1};

static uint8_t gate_out_bit(GateKind k, uint8_t a, uint8_t b) {
  switch (k) {
    case GateKind::And: return a & b;
    case GateKind::Or: return a | b;
    case GateKind::Not: return !a;
  }
  return 0;
}

Tables::Tables(Circuit c)
    : circuit_(std::move(c)), uid_(g_tables_uid.fetch_add(1)) {
  const Circuit& circ = circuit_;
  uint32_t m = circ.gate_count();
  block_first_.assign(m + 2, 0);
  masks_.assign(m + 1, 0);
  values_.assign(circ.var_count(), -1);
  occ_.assign(circ.var_count(), {});

  for (uint32_t j = 1; j <= m; ++j) {
    const Gate& g = circ.gate(j);
    block_first_[j] = uint32_t(rows_.size()) + 1;

    // gate variables sorted by column order; the output sorts last
    std::array<uint32_t, 3> vars{};
    int nin = g.arity();
    for (int k = 0; k < nin; ++k) vars[k] = circ.var_ord(g.in[k]);
    std::sort(vars.begin(), vars.begin() + nin);
    vars[nin] = circ.var_ord(Var::gate_out(j));

    // ascending binary order over the sorted inputs, first variable = MSB
    int combos = 1 << nin;
    for (int pattern = 0; pattern < combos; ++pattern) {
      CttRow row;
      row.id = uint32_t(rows_.size()) + 1;
      row.gate = j;
      row.cell_count = uint8_t(nin + 1);
      uint8_t bits[2] = {0, 0};
      for (int k = 0; k < nin; ++k) {
        bits[k] = uint8_t((pattern >> (nin - 1 - k)) & 1);
        row.cells[k] = {vars[k], bits[k]};
      }
      row.cells[nin] = {vars[nin], gate_out_bit(g.kind, bits[0], bits[1])};
      rows_.push_back(row);
    }
    masks_[j] = combos == 4 ? 0x0f : 0x03;
  }
  block_first_[m + 1] = uint32_t(rows_.size()) + 1;

  for (const CttRow& r : rows_)
    for (int k = 0; k < r.cell_count; ++k)
      occ_[r.cells[k].var].push_back({r.id, r.cells[k].bit});
}

uint32_t Tables::block_size(uint32_t gate) const {
  return block_first_[gate + 1] - block_first_[gate];
}

bool Tables::row_live(uint32_t row_id) const {
  const CttRow& r = rows_[row_id - 1];
  return (masks_[r.gate] >> (row_id - block_first_[r.gate])) & 1;
}

std::span<const RowBit> Tables::occurrences(Var v) const {
  return occ_[circuit_.var_ord(v)];
}

int Tables::degree(uint32_t gate) const { return std::popcount(masks_[gate]); }

std::vector<uint32_t> Tables::live_rows(uint32_t gate) const {
  std::vector<uint32_t> out;
  uint8_t mask = masks_[gate];
  uint32_t first = block_first_[gate];
  while (mask) {
    int bit = std::countr_zero(mask);
    out.push_back(first + uint32_t(bit));
    mask &= uint8_t(mask - 1);
  }
  return out;
}

std::optional<uint32_t> Tables::sole_live_row(uint32_t gate) const {
  uint8_t mask = masks_[gate];
  if (std::popcount(mask) != 1) return std::nullopt;
  return block_first_[gate] + uint32_t(std::countr_zero(mask));
}

uint64_t Tables::live_total() const {
  uint64_t total = 0;
  for (uint32_t j = 1; j < masks_.size(); ++j) total += uint64_t(degree(j));
  return total;
}

std::optional<uint8_t> Tables::value(Var v) const {
  int8_t x = values_[circuit_.var_ord(v)];
  return x < 0 ? std::nullopt : std::optional<uint8_t>(uint8_t(x));
}

Assignment Tables::assignment() const {
  Assignment a(circuit_.input_count(), circuit_.gate_count());
  for (uint32_t ord = 0; ord < values_.size(); ++ord)
    if (values_[ord] >= 0) a.set(circuit_.var_at(ord), uint8_t(values_[ord]));
  return a;
}

DeletionReport Tables::assign(Var v, uint8_t bit) {
  DeletionReport rep;
  rep.var = v;
  rep.bit = bit;
  uint32_t ord = circuit_.var_ord(v);
  if (values_[ord] >= 0) {
    if (values_[ord] != int8_t(bit)) throw ConflictingAssignment(v);
    rep.no_op = true;
    return rep;
  }
  values_[ord] = int8_t(bit);
  if (v.is_input()) ++assigned_inputs_;

  for (const RowBit& rb : occ_[ord]) {
    if (rb.bit == bit) continue;
    const CttRow& r = rows_[rb.row - 1];
    uint8_t pos = uint8_t(rb.row - block_first_[r.gate]);
    if (!((masks_[r.gate] >> pos) & 1)) continue;
    masks_[r.gate] &= uint8_t(~(1u << pos));
    rep.deleted_rows.push_back(rb.row);
    if (rep.degree_changed.empty() || rep.degree_changed.back() != r.gate)
      rep.degree_changed.push_back(r.gate);
    if (masks_[r.gate] == 0 && !rep.contradiction_gate)
      rep.contradiction_gate = r.gate;
  }
  return rep;
}

TablesSnapshot Tables::snapshot() const {
  return TablesSnapshot{masks_, values_, assigned_inputs_, uid_};
}

void Tables::restore(const TablesSnapshot& s) {
  if (s.owner_uid != uid_) throw ForeignSnapshot();
  masks_ = s.masks;
  values_ = s.values;
  assigned_inputs_ = s.assigned_inputs;
}

std::string Tables::dump() const {
  std::ostringstream os;
  for (const CttRow& r : rows_) {
    if (!row_live(r.id)) continue;
    os << "row " << r.id << " G" << r.gate;
    for (int k = 0; k < r.cell_count; ++k)
      os << ' ' << var_name(circuit_.var_at(r.cells[k].var)) << '='
         << int(r.cells[k].bit);
    os << '\n';
  }
  for (uint32_t j = 1; j <= circuit_.gate_count(); ++j) {
    os << "deg G" << j << " = {";
    bool first = true;
    for (uint32_t id : live_rows(j)) {
      if (!first) os << ',';
      os << id;
      first = false;
    }
    os << "}\n";
  }
  return os.str();
}

bool tables_coherent(const Tables& t) {
  const Circuit& c = t.circuit();
  // row blocks are contiguous, sized by gate kind, and ids are sequential
  uint32_t expect_id = 1;
  for (uint32_t j = 1; j <= c.gate_count(); ++j) {
    uint32_t size = t.block_size(j);
    if (size != uint32_t(1 << c.gate(j).arity())) return false;
    if (t.block_first(j) != expect_id) return false;
    expect_id += size;
    // live sets from the mask agree with a per-row scan
    auto live = t.live_rows(j);
    std::vector<uint32_t> scan;
    for (uint32_t id = t.block_first(j); id < t.block_first(j) + size; ++id) {
      if (t.row(id).gate != j) return false;
      if (t.row_live(id)) scan.push_back(id);
    }
    if (live != scan) return false;
    if (t.degree(j) != int(live.size())) return false;
  }
  if (expect_id != t.row_count() + 1) return false;
  // occurrence index matches a linear scan of all cells
  for (uint32_t ord = 0; ord < c.var_count(); ++ord) {
    std::vector<RowBit> scan;
    for (uint32_t id = 1; id <= t.row_count(); ++id) {
      const CttRow& r = t.row(id);
      for (int k = 0; k < r.cell_count; ++k)
        if (r.cells[k].var == ord) scan.push_back({id, r.cells[k].bit});
    }
    auto idx = t.occurrences(c.var_at(ord));
    if (idx.size() != scan.size()) return false;
    for (size_t k = 0; k < scan.size(); ++k)
      if (idx[k].row != scan[k].row || idx[k].bit != scan[k].bit) return false;
  }
  return true;
}

}  // namespace csat
