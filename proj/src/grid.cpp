#include "ssc/grid.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

namespace ssc {

void assert_fail(const char* expr, const char* file, int line) {
  std::ostringstream os;
  os << "invariant violated: " << expr << " (" << file << ":" << line << ")";
  throw InternalError(os.str());
}

int cand_count(CandSet s) { return std::popcount(s); }

Digit cand_single(CandSet s) {
  if (s == 0 || (s & (s - 1)) != 0) return 0;
  return std::countr_zero(s) + 1;
}

Dims Dims::of(int n) {
  if (n < 2) throw Error("block order must be at least 2, got " + std::to_string(n));
  if (n > 5) throw Error("block order above 5 is not supported");
  return Dims{n, n * n};
}

std::string to_string(Cell c) {
  return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")";
}

const char* to_string(Group::Kind k) {
  switch (k) {
    case Group::Kind::row: return "row";
    case Group::Kind::column: return "column";
    case Group::Kind::block: return "block";
  }
  return "?";
}

std::vector<Group> groups(const Dims& dims) {
  const int N = dims.N, n = dims.n;
  std::vector<Group> out;
  out.reserve(3 * N);
  for (int i = 0; i < N; ++i) {
    Group g{Group::Kind::row, i, {}};
    for (int j = 0; j < N; ++j) g.members.push_back({i, j});
    out.push_back(std::move(g));
  }
  for (int j = 0; j < N; ++j) {
    Group g{Group::Kind::column, j, {}};
    for (int i = 0; i < N; ++i) g.members.push_back({i, j});
    out.push_back(std::move(g));
  }
  for (int b = 0; b < N; ++b) {
    const int bi = (b / n) * n, bj = (b % n) * n;
    Group g{Group::Kind::block, b, {}};
    for (int di = 0; di < n; ++di)
      for (int dj = 0; dj < n; ++dj) g.members.push_back({bi + di, bj + dj});
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<std::pair<Group, Group>> locked_pairs(const Dims& dims) {
  const auto& geo = Geometry::of(dims);
  std::vector<std::pair<Group, Group>> out;
  out.reserve(geo.pairs.size());
  for (const auto& p : geo.pairs)
    out.emplace_back(geo.group_list[p.a], geo.group_list[p.b]);
  return out;
}

StrategySet StrategySet::parse(const std::string& text) {
  StrategySet s;
  std::string tok;
  std::istringstream is(text);
  while (std::getline(is, tok, ',')) {
    // trim spaces
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.erase(tok.begin());
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.pop_back();
    if (tok.empty()) continue;
    if (tok == "ns") s.naked_single = true;
    else if (tok == "hs") s.hidden_single = true;
    else if (tok == "lc") s.locked_candidate = true;
    else throw ParseError("unknown strategy name: '" + tok + "' (expected ns, hs, lc)");
  }
  if (!s.any()) throw ParseError("strategy list is empty");
  return s;
}

std::string StrategySet::to_string() const {
  std::string out;
  auto append = [&](const char* name) {
    if (!out.empty()) out += ',';
    out += name;
  };
  if (naked_single) append("ns");
  if (hidden_single) append("hs");
  if (locked_candidate) append("lc");
  return out;
}

int ClueMask::count() const {
  int c = 0;
  for (auto v : flags) c += v != 0;
  return c;
}

std::vector<Cell> ClueMask::cells() const {
  std::vector<Cell> out;
  for (int idx = 0; idx < dims.cells(); ++idx)
    if (flags[idx]) out.push_back({idx / dims.N, idx % dims.N});
  return out;
}

int ClueAssignment::count() const {
  int c = 0;
  for (auto v : values) c += v != 0;
  return c;
}

ClueMask ClueAssignment::mask() const {
  ClueMask m(dims);
  for (int idx = 0; idx < dims.cells(); ++idx) m.flags[idx] = values[idx] != 0;
  return m;
}

Geometry::Geometry(Dims d) : dims(d) {
  const int n = d.n;
  group_list = groups(d);
  group_cells.resize(group_list.size());
  cell_groups.assign(d.cells(), {-1, -1, -1});
  for (size_t gi = 0; gi < group_list.size(); ++gi) {
    auto& cells = group_cells[gi];
    for (const Cell& c : group_list[gi].members) {
      const int idx = d.cell_index(c.i, c.j);
      cells.push_back(idx);
      auto& slots = cell_groups[idx];
      slots[static_cast<int>(group_list[gi].kind)] = static_cast<int>(gi);
    }
  }
  peers.resize(d.cells());
  for (int idx = 0; idx < d.cells(); ++idx) {
    std::vector<uint8_t> seen(d.cells(), 0);
    for (int gi : cell_groups[idx])
      for (int other : group_cells[gi])
        if (other != idx && !seen[other]) {
          seen[other] = 1;
          peers[idx].push_back(other);
        }
    std::sort(peers[idx].begin(), peers[idx].end());
  }
  // Ordered pairs with |A ∩ B| = n; only line/block combinations qualify.
  for (size_t a = 0; a < group_list.size(); ++a)
    for (size_t b = 0; b < group_list.size(); ++b) {
      if (a == b) continue;
      std::vector<uint8_t> in_b(d.cells(), 0);
      for (int c : group_cells[b]) in_b[c] = 1;
      int common = 0;
      for (int c : group_cells[a]) common += in_b[c];
      if (common != n) continue;
      LockedPair p;
      p.a = static_cast<int>(a);
      p.b = static_cast<int>(b);
      for (int c : group_cells[a])
        if (!in_b[c]) p.a_minus_b.push_back(c);
      std::vector<uint8_t> in_a(d.cells(), 0);
      for (int c : group_cells[a]) in_a[c] = 1;
      for (int c : group_cells[b])
        if (!in_a[c]) p.b_minus_a.push_back(c);
      pairs.push_back(std::move(p));
    }
}

const Geometry& Geometry::of(const Dims& d) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Geometry>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[d.n];
  if (!slot) slot = std::make_unique<Geometry>(d);
  return *slot;
}

namespace {

std::string strip_whitespace(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  return out;
}

void require_single_char_digits(const Dims& dims) {
  if (dims.N > 9)
    throw ParseError("grid text formats support side length up to 9, got " +
                     std::to_string(dims.N));
}

}  // namespace

ClueAssignment parse_grid(const std::string& text, const Dims& dims) {
  require_single_char_digits(dims);
  const std::string s = strip_whitespace(text);
  const int M = dims.cells(), N = dims.N;
  const size_t compact_len = static_cast<size_t>(M);
  const size_t dotted_len = static_cast<size_t>(M + N - 1);
  ClueAssignment out(dims);

  auto place = [&](int idx, char ch, size_t pos) {
    int v = ch - '0';
    if (v > N)
      throw ParseError("digit " + std::string(1, ch) + " exceeds board size " +
                       std::to_string(N) + " at position " + std::to_string(pos));
    out.values[idx] = v;
  };

  if (s.size() == compact_len) {
    for (size_t p = 0; p < s.size(); ++p) {
      char ch = s[p];
      if (ch == '.') continue;  // empty
      if (ch < '0' || ch > '9')
        throw ParseError("unexpected symbol '" + std::string(1, ch) +
                         "' in compact grid at position " + std::to_string(p));
      place(static_cast<int>(p), ch, p);
    }
    return out;
  }
  if (s.size() == dotted_len) {
    int idx = 0;
    for (size_t p = 0; p < s.size(); ++p) {
      const bool separator_slot = (p + 1) % static_cast<size_t>(N + 1) == 0;
      char ch = s[p];
      if (separator_slot) {
        if (ch != '.')
          throw ParseError("mixed grid format: expected '.' separator at position " +
                           std::to_string(p));
        continue;
      }
      if (ch == '.')
        throw ParseError("mixed grid format: '.' inside a dotted-format digit run at position " +
                         std::to_string(p));
      if (ch < '0' || ch > '9')
        throw ParseError("unexpected symbol '" + std::string(1, ch) +
                         "' in dotted grid at position " + std::to_string(p));
      place(idx++, ch, p);
    }
    return out;
  }
  throw ParseError("grid text has " + std::to_string(s.size()) +
                   " symbols; expected " + std::to_string(compact_len) +
                   " (compact) or " + std::to_string(dotted_len) + " (dotted)");
}

std::string serialize_grid(const std::vector<Digit>& values, const Dims& dims,
                           GridFormat format) {
  require_single_char_digits(dims);
  SSC_ASSERT(static_cast<int>(values.size()) == dims.cells());
  std::string out;
  const int N = dims.N;
  for (int i = 0; i < N; ++i) {
    if (format == GridFormat::dotted && i > 0) out.push_back('.');
    for (int j = 0; j < N; ++j)
      out.push_back(static_cast<char>('0' + values[dims.cell_index(i, j)]));
  }
  return out;
}

std::string serialize_grid(const ClueAssignment& a, GridFormat format) {
  return serialize_grid(a.values, a.dims, format);
}

ClueMask parse_mask(const std::string& text, const Dims& dims) {
  const std::string s = strip_whitespace(text);
  const bool mask_symbols =
      s.size() == static_cast<size_t>(dims.cells()) &&
      std::all_of(s.begin(), s.end(), [](char ch) {
        return ch == '0' || ch == '1' || ch == '*' || ch == '-';
      });
  ClueMask out(dims);
  if (mask_symbols) {
    for (size_t p = 0; p < s.size(); ++p)
      out.flags[p] = (s[p] == '1' || s[p] == '*');
    return out;
  }
  // Fall back to grid syntax: nonzero cells define the mask.
  return parse_grid(text, dims).mask();
}

std::string serialize_mask(const ClueMask& mask) {
  std::string out(mask.flags.size(), '0');
  for (size_t p = 0; p < mask.flags.size(); ++p)
    if (mask.flags[p]) out[p] = '1';
  return out;
}

DuplicateClueError::DuplicateClueError(DuplicateClue d)
    : Error("duplicate clue digit " + std::to_string(d.digit) + " in " + d.group +
            " at " + ssc::to_string(d.a) + " and " + ssc::to_string(d.b)),
      info(d) {}

std::optional<DuplicateClue> find_duplicate_clues(const ClueAssignment& a) {
  const auto& geo = Geometry::of(a.dims);
  for (size_t gi = 0; gi < geo.group_cells.size(); ++gi) {
    std::vector<int> first(a.dims.N + 1, -1);
    for (int idx : geo.group_cells[gi]) {
      const Digit n = a.values[idx];
      if (n == 0) continue;
      if (first[n] >= 0) {
        const Group& g = geo.group_list[gi];
        Cell ca{first[n] / a.dims.N, first[n] % a.dims.N};
        Cell cb{idx / a.dims.N, idx % a.dims.N};
        return DuplicateClue{ca, cb, n,
                             std::string(to_string(g.kind)) + " " + std::to_string(g.index)};
      }
      first[n] = idx;
    }
  }
  return std::nullopt;
}

GridState make_initial_state_unchecked(const ClueAssignment& a) {
  const auto& geo = Geometry::of(a.dims);
  GridState q(a.dims);
  q.f = a.values;
  for (int idx = 0; idx < a.dims.cells(); ++idx) {
    const Digit n = q.f[idx];
    if (n == 0) continue;
    SSC_ASSERT(n >= 1 && n <= a.dims.N);
    q.g[idx] &= cand_bit(n);
    for (int peer : geo.peers[idx]) q.g[peer] &= ~cand_bit(n);
  }
  return q;
}

GridState make_initial_state(const ClueAssignment& a) {
  if (auto dup = find_duplicate_clues(a)) throw DuplicateClueError(*dup);
  return make_initial_state_unchecked(a);
}

std::optional<StateViolation> validate_state(const GridState& q) {
  const auto& geo = Geometry::of(q.dims);
  const int M = q.dims.cells(), N = q.dims.N;
  for (int idx = 0; idx < M; ++idx)
    if (q.g[idx] == 0)
      return StateViolation{StateViolation::Condition::s1,
                            {idx / N, idx % N},
                            0,
                            "empty candidate set"};
  for (int idx = 0; idx < M; ++idx) {
    const Digit own = q.f[idx];
    if (own != 0 && (q.g[idx] & ~cand_bit(own)) != 0) {
      const Digit extra = std::countr_zero(q.g[idx] & ~cand_bit(own)) + 1;
      return StateViolation{StateViolation::Condition::s2,
                            {idx / N, idx % N},
                            extra,
                            "candidate survives although a different digit is placed"};
    }
    for (int peer : geo.peers[idx]) {
      const Digit n = q.f[peer];
      if (n != 0 && cand_has(q.g[idx], n))
        return StateViolation{StateViolation::Condition::s2,
                              {idx / N, idx % N},
                              n,
                              "candidate survives although a peer holds the digit"};
    }
  }
  for (int idx = 0; idx < M; ++idx) {
    const Digit own = q.f[idx];
    if (own != 0 && q.g[idx] != cand_bit(own))
      return StateViolation{StateViolation::Condition::filled_form,
                            {idx / N, idx % N},
                            own,
                            "filled cell without singleton candidate set"};
  }
  return std::nullopt;
}

bool is_complete(const GridState& q) {
  for (Digit v : q.f)
    if (v == 0) return false;
  return true;
}

bool is_valid_solution(const GridState& q) {
  if (!is_complete(q)) return false;
  const auto& geo = Geometry::of(q.dims);
  for (const auto& cells : geo.group_cells) {
    CandSet seen = 0;
    for (int idx : cells) {
      const CandSet bit = cand_bit(q.f[idx]);
      if (seen & bit) return false;
      seen |= bit;
    }
  }
  return true;
}

}  // namespace ssc
