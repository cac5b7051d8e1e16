// Board geometry, text formats, and the normal-form state of grid.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ssc {

// Spec-level invariants are enforced with a throwing assert so they stay on
// in release builds.
[[noreturn]] void assert_fail(const char* expr, const char* file, int line);
#define SSC_ASSERT(expr) \
  do {                   \
    if (!(expr)) ::ssc::assert_fail(#expr, __FILE__, __LINE__); \
  } while (0)

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

// 0 means "no digit is placed"; candidates and clues are in [1, N].
using Digit = int;

// Candidate set as a bitmask: bit (n-1) set iff digit n is a candidate.
using CandSet = uint32_t;

inline CandSet cand_bit(Digit n) { return CandSet{1} << (n - 1); }
inline bool cand_has(CandSet s, Digit n) { return (s >> (n - 1)) & 1; }
inline CandSet cand_full(int N) { return (CandSet{1} << N) - 1; }
int cand_count(CandSet s);
Digit cand_single(CandSet s);  // the digit of a singleton set; 0 otherwise

struct Dims {
  int n = 0;  // block order, >= 2
  int N = 0;  // side length, = n*n

  static Dims of(int n);
  int cells() const { return N * N; }
  int cell_index(int i, int j) const { return i * N + j; }
  bool operator==(const Dims&) const = default;
};

struct Cell {
  int i = 0;
  int j = 0;
  bool operator==(const Cell&) const = default;
  auto operator<=>(const Cell&) const = default;
};

std::string to_string(Cell c);

struct Group {
  enum class Kind { row, column, block };
  Kind kind;
  int index;                  // 0..N-1 within its kind
  std::vector<Cell> members;  // exactly N cells
};

const char* to_string(Group::Kind k);

// All rows, then all columns, then all blocks (row-major block order).
std::vector<Group> groups(const Dims& dims);

// Ordered pairs (A, B) of distinct groups with |A ∩ B| = n.
std::vector<std::pair<Group, Group>> locked_pairs(const Dims& dims);

struct StrategySet {
  bool naked_single = false;
  bool hidden_single = false;
  bool locked_candidate = false;

  static StrategySet all() { return {true, true, true}; }
  static StrategySet naked_only() { return {true, false, false}; }
  // Comma list of "ns", "hs", "lc"; unknown names are rejected.
  static StrategySet parse(const std::string& text);
  bool any() const { return naked_single || hidden_single || locked_candidate; }
  std::string to_string() const;
  bool operator==(const StrategySet&) const = default;
};

struct ClueMask {
  Dims dims;
  std::vector<uint8_t> flags;  // N*N entries, nonzero = clue position

  ClueMask() = default;
  explicit ClueMask(Dims d) : dims(d), flags(d.cells(), 0) {}
  bool contains(int cell) const { return flags[cell] != 0; }
  void add(Cell c) { flags[dims.cell_index(c.i, c.j)] = 1; }
  int count() const;
  std::vector<Cell> cells() const;
  bool operator==(const ClueMask&) const = default;
};

struct ClueAssignment {
  Dims dims;
  std::vector<Digit> values;  // N*N entries, 0 = not in the domain

  ClueAssignment() = default;
  explicit ClueAssignment(Dims d) : dims(d), values(d.cells(), 0) {}
  Digit at(int cell) const { return values[cell]; }
  void set(Cell c, Digit n) { values[dims.cell_index(c.i, c.j)] = n; }
  int count() const;
  ClueMask mask() const;
  bool operator==(const ClueAssignment&) const = default;
};

// Normal-form state q = (f, g).  Invariants (checked by validate_state):
//   S1: g nonempty everywhere
//   S2: forced removals applied (own placed digit, placed digits of peers)
struct GridState {
  Dims dims;
  std::vector<Digit> f;    // placements, 0 = empty
  std::vector<CandSet> g;  // candidate sets

  GridState() = default;
  explicit GridState(Dims d)
      : dims(d), f(d.cells(), 0), g(d.cells(), cand_full(d.N)) {}
  bool operator==(const GridState&) const = default;
};

// Precomputed board geometry shared by the engine and encoder.  Immutable
// after construction; Geometry::of caches one instance per block order.
struct Geometry {
  Dims dims;
  std::vector<Group> group_list;
  std::vector<std::vector<int>> group_cells;  // per group: linear cell ids
  std::vector<std::array<int, 3>> cell_groups;  // per cell: row, column, block
  std::vector<std::vector<int>> peers;          // per cell: distinct group mates

  struct LockedPair {
    int a = 0, b = 0;               // indices into group_list
    std::vector<int> a_minus_b;     // cells of A \ B
    std::vector<int> b_minus_a;     // cells of B \ A
  };
  std::vector<LockedPair> pairs;

  explicit Geometry(Dims d);
  static const Geometry& of(const Dims& d);
};

// --- text formats ---------------------------------------------------------
// compact: N*N symbols, '0' or '.' = empty ('.' accepted on input only)
// dotted:  N runs of N digits joined by periods, '0' = empty
// Both restricted to N <= 9 (single-character digits).
enum class GridFormat { compact, dotted };

ClueAssignment parse_grid(const std::string& text, const Dims& dims);
std::string serialize_grid(const std::vector<Digit>& values, const Dims& dims,
                           GridFormat format);
std::string serialize_grid(const ClueAssignment& a, GridFormat format);

// Mask text: N*N symbols, '1'/'*' = clue position, '0'/'-' = free.  A grid
// string (compact or dotted) is also accepted; its nonzero cells become the
// mask.
ClueMask parse_mask(const std::string& text, const Dims& dims);
std::string serialize_mask(const ClueMask& mask);

// --- initial states and validation ----------------------------------------

struct DuplicateClue {
  Cell a, b;
  Digit digit = 0;
  std::string group;  // e.g. "row 3"
};

struct DuplicateClueError : Error {
  DuplicateClue info;
  explicit DuplicateClueError(DuplicateClue d);
};

// First pair of equal clue digits sharing a group, if any.
std::optional<DuplicateClue> find_duplicate_clues(const ClueAssignment& a);

// f = clue digits; g = exactly the S2-forced removals, nothing more.
// Throws DuplicateClueError when two equal clue digits share a group.
GridState make_initial_state(const ClueAssignment& a);

// Same construction without the duplicate check; duplicates surface as empty
// candidate sets (the closure reports them as a step-0 contradiction).
GridState make_initial_state_unchecked(const ClueAssignment& a);

struct StateViolation {
  enum class Condition { s1, s2, filled_form };
  Condition condition;
  Cell cell;
  Digit digit = 0;
  std::string detail;
};

// First violated condition, or nullopt for a valid state.
std::optional<StateViolation> validate_state(const GridState& q);

bool is_complete(const GridState& q);

// Complete and every digit exactly once per group.
bool is_valid_solution(const GridState& q);

}  // namespace ssc
