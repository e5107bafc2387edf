#pragma once

// Epoch-based lazy evaluation. An exact object is a Node: a type tag, a kind
// (index into the kind table), dependencies and a cache holding one
// approximation per epoch. Epoch n works at base precision 2^n.

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "xpadic/approx.hpp"
#include "xpadic/approx_poly.hpp"

namespace xpadic::lazy {

enum class Type { ring, element, poly_ring, poly };

const char* type_name(Type t);

/// Approximation of a polynomial ring: polynomials over `base`.
struct PolyRingApprox {
  ApproxRing base;
};

struct UserFunction;
class StraightLineProgram;

using Value = std::variant<std::monostate, ApproxRing, ApproxElement, PolyRingApprox, ApproxPoly,
                           mpz_class, mpq_class, std::int64_t,
                           std::shared_ptr<const StraightLineProgram>,
                           std::shared_ptr<const UserFunction>>;

/// Read-only view of dependency approximations at one epoch.
class Args {
 public:
  explicit Args(std::span<const Value* const> values) : values_(values) {}
  std::size_t size() const { return values_.size(); }
  const Value& operator[](std::size_t i) const { return *values_[i]; }
  template <class T>
  const T& get(std::size_t i) const {
    return std::get<T>(*values_[i]);
  }
  Args tail(std::size_t from) const { return Args(values_.subspan(from)); }

 private:
  std::span<const Value* const> values_;
};

using GetApprox = std::function<Value(int epoch, const Args& deps)>;

struct UserFunction {
  GetApprox fn;
  std::string name = "user";
};

class Node;
using NodePtr = std::shared_ptr<Node>;

struct Dep {
  NodePtr node;
  Value constant;

  static Dep lazy(NodePtr n) { return Dep{std::move(n), {}}; }
  static Dep value(Value v) { return Dep{nullptr, std::move(v)}; }
  bool is_lazy() const { return node != nullptr; }
};

/// What a kind expects in a dependency slot.
enum class Slot { constant, ring, element, poly_ring, poly, any };

/// Entry of the kind table. `restrict`, when set, produces the approximation
/// at an epoch below min_epoch from the one at min_epoch; element and
/// polynomial kinds default to coercion into the parent's approximation.
struct KindEntry {
  Type type;
  std::string name;
  std::vector<Slot> slots;
  std::optional<Slot> rest;  // extra dependencies allowed when set
  GetApprox get_approx;
  std::function<Value(const Value& at_min, int epoch, const Args& deps)> restrict;
};

class KindTable {
 public:
  static KindTable& global();
  int add(KindEntry entry);
  const KindEntry& at(int kind) const;
  /// Looks a kind up by type and name; throws DomainError if missing.
  int find(Type type, const std::string& name) const;

 private:
  std::vector<KindEntry> entries_;
};

class Node {
 public:
  Node(Type type, int kind, std::vector<Dep> deps, NodePtr parent, int min_epoch);

  std::uint64_t id() const { return id_; }
  Type type() const { return type_; }
  int kind() const { return kind_; }
  const std::vector<Dep>& deps() const { return deps_; }
  const NodePtr& parent() const { return parent_; }
  int min_epoch() const { return min_epoch_; }
  void set_min_epoch(int n) { min_epoch_ = n; }
  /// Number of epochs cached (entries 1..cached_epochs()).
  int cached_epochs() const { return static_cast<int>(cache_.size()); }
  const Value& cached(int epoch) const { return cache_.at(epoch - 1); }
  std::string describe() const;

 private:
  friend const Value& approximation(const NodePtr&, int, std::optional<int>);
  friend struct Engine;

  std::uint64_t id_;
  Type type_;
  int kind_;
  std::vector<Dep> deps_;
  NodePtr parent_;
  int min_epoch_;
  std::vector<Value> cache_;
};

/// Checks arity and slot types against the kind table.
NodePtr make_node(Type type, int kind, std::vector<Dep> deps, NodePtr parent = nullptr,
                  int min_epoch = 1);

/// Node whose approximations are fn applied to the approximations of deps;
/// fn sees the dependencies only, not itself.
NodePtr make_user_node(Type type, NodePtr parent, GetApprox fn, std::vector<Dep> deps,
                       std::string name = "user", int min_epoch = 1);

struct Config {
  int max_epoch = 31;
  bool validate = true;
  std::function<void(const Node&, int epoch)> on_get_approx;
  std::uint64_t get_approx_calls = 0;
};

/// Process-wide configuration; max_epoch starts from XPADIC_MAX_EPOCH if set.
Config& config();

/// Approximation of x at epoch n, filling the cache as needed. Throws
/// BudgetExhausted if n exceeds the budget (the global one by default).
const Value& approximation(const NodePtr& x, int n, std::optional<int> budget = std::nullopt);

inline std::int64_t epoch_precision(int n) { return std::int64_t{1} << n; }

/// Checks (a) weak equality with the entry at n-1, (b) no loss of absolute
/// precision, (c) membership in the parent's approximation at n.
bool is_valid_approximation(const Value& candidate, const Node& x, int n);

struct Instruction {
  Type type;
  int kind;
  std::vector<std::size_t> operands;
};

/// Flattened intermediate subgraph. Slots are numbered constants first,
/// then inputs, then one slot per instruction; the last instruction is the
/// output.
class StraightLineProgram {
 public:
  std::size_t constant_count = 0;
  std::size_t input_count = 0;
  std::vector<Instruction> code;

  /// args holds the constants followed by the input approximations.
  Value run(int epoch, const Args& args) const;
};

/// Replaces the subgraph between z and the given inputs by one program node
/// with dependencies [program, constants..., inputs...].
NodePtr optimize(const NodePtr& z, const std::vector<NodePtr>& inputs);

}  // namespace xpadic::lazy
