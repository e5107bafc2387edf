#include "xpadic/lazy.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <unordered_map>
#include <unordered_set>

#include "xpadic/errors.hpp"

namespace xpadic::lazy {

const char* type_name(Type t) {
  switch (t) {
    case Type::ring: return "ring";
    case Type::element: return "element";
    case Type::poly_ring: return "poly-ring";
    case Type::poly: return "poly";
  }
  return "?";
}

namespace {

bool slot_accepts(Slot s, const Dep& d) {
  if (s == Slot::any) return true;
  if (s == Slot::constant) return !d.is_lazy();
  if (!d.is_lazy()) return false;
  switch (s) {
    case Slot::ring: return d.node->type() == Type::ring;
    case Slot::element: return d.node->type() == Type::element;
    case Slot::poly_ring: return d.node->type() == Type::poly_ring;
    case Slot::poly: return d.node->type() == Type::poly;
    default: return false;
  }
}

bool holds_type(Type t, const Value& v) {
  switch (t) {
    case Type::ring: return std::holds_alternative<ApproxRing>(v);
    case Type::element: return std::holds_alternative<ApproxElement>(v);
    case Type::poly_ring: return std::holds_alternative<PolyRingApprox>(v);
    case Type::poly: return std::holds_alternative<ApproxPoly>(v);
  }
  return false;
}

void register_builtins(KindTable& table) {
  for (Type t : {Type::ring, Type::element, Type::poly_ring, Type::poly}) {
    table.add(KindEntry{t, "user", {Slot::constant}, Slot::any,
                        [](int epoch, const Args& deps) {
                          const auto& f = deps.get<std::shared_ptr<const UserFunction>>(0);
                          return f->fn(epoch, deps.tail(1));
                        },
                        {}});
    table.add(KindEntry{t, "program", {Slot::constant}, Slot::any,
                        [](int epoch, const Args& deps) {
                          const auto& p = deps.get<std::shared_ptr<const StraightLineProgram>>(0);
                          return p->run(epoch, deps.tail(1));
                        },
                        {}});
  }
}

// Why a candidate approximation is rejected, or empty if it is fine.
std::string rejection(const Value& v, const Node& x, int n) {
  if (!holds_type(x.type(), v)) {
    return std::string("approximation is not of type ") + type_name(x.type());
  }
  if (x.parent() && x.parent()->cached_epochs() >= n) {
    const Value& pv = x.parent()->cached(n);
    switch (x.type()) {
      case Type::element:
        if (!(std::get<ApproxElement>(v).ring() == std::get<ApproxRing>(pv))) {
          return "element does not lie in the parent's approximation";
        }
        break;
      case Type::poly:
        if (!(std::get<ApproxPoly>(v).ring() == std::get<PolyRingApprox>(pv).base)) {
          return "polynomial does not lie in the parent's approximation";
        }
        break;
      case Type::poly_ring:
        if (!(std::get<PolyRingApprox>(v).base == std::get<ApproxRing>(pv))) {
          return "polynomial ring is not over the parent's approximation";
        }
        break;
      case Type::ring:
        break;
    }
  }
  if (n < 2 || x.cached_epochs() < n - 1) return {};
  const Value& prev = x.cached(n - 1);
  switch (x.type()) {
    case Type::element: {
      const auto& a = std::get<ApproxElement>(v);
      const auto& b = std::get<ApproxElement>(prev);
      if (!a.ring().same_family(b.ring())) return "ring family changed between epochs";
      if (a.absolute_precision() < b.absolute_precision()) return "absolute precision decreased";
      if (!weakly_equal(a, b)) return "not weakly equal to the previous epoch";
      break;
    }
    case Type::poly: {
      const auto& a = std::get<ApproxPoly>(v);
      const auto& b = std::get<ApproxPoly>(prev);
      if (!a.ring().same_family(b.ring())) return "ring family changed between epochs";
      if (a.absolute_precision() < b.absolute_precision()) return "absolute precision decreased";
      if (!weakly_equal(a, b)) return "not weakly equal to the previous epoch";
      break;
    }
    case Type::ring: {
      const auto& a = std::get<ApproxRing>(v);
      const auto& b = std::get<ApproxRing>(prev);
      if (!a.same_family(b)) return "ring family changed between epochs";
      if (a.precision() < b.precision()) return "precision decreased";
      break;
    }
    case Type::poly_ring: {
      const auto& a = std::get<PolyRingApprox>(v).base;
      const auto& b = std::get<PolyRingApprox>(prev).base;
      if (!a.same_family(b)) return "ring family changed between epochs";
      if (a.precision() < b.precision()) return "precision decreased";
      break;
    }
  }
  return {};
}

template <class E>
[[noreturn]] void rethrow_as(const E& e, const std::string& where) {
  throw E(where + ": " + e.what());
}

}  // namespace

// ----------------------------------------------------------------- KindTable

KindTable& KindTable::global() {
  static KindTable* table = [] {
    auto* t = new KindTable();
    register_builtins(*t);
    return t;
  }();
  return *table;
}

int KindTable::add(KindEntry entry) {
  for (const auto& e : entries_) {
    if (e.type == entry.type && e.name == entry.name) {
      throw DomainError("kind registered twice: " + entry.name);
    }
  }
  entries_.push_back(std::move(entry));
  return static_cast<int>(entries_.size()) - 1;
}

const KindEntry& KindTable::at(int kind) const {
  if (kind < 0 || kind >= static_cast<int>(entries_.size())) {
    throw DomainError("unknown kind " + std::to_string(kind));
  }
  return entries_[kind];
}

int KindTable::find(Type type, const std::string& name) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].type == type && entries_[i].name == name) return static_cast<int>(i);
  }
  throw DomainError(std::string("no ") + type_name(type) + " kind named " + name);
}

// ---------------------------------------------------------------------- Node

Node::Node(Type type, int kind, std::vector<Dep> deps, NodePtr parent, int min_epoch)
    : type_(type), kind_(kind), deps_(std::move(deps)), parent_(std::move(parent)),
      min_epoch_(min_epoch) {
  static std::atomic<std::uint64_t> next{1};
  id_ = next.fetch_add(1);
}

std::string Node::describe() const {
  return KindTable::global().at(kind_).name + " " + type_name(type_) + " node #" +
         std::to_string(id_);
}

NodePtr make_node(Type type, int kind, std::vector<Dep> deps, NodePtr parent, int min_epoch) {
  const KindEntry& k = KindTable::global().at(kind);
  if (k.type != type) throw DomainError("kind " + k.name + " does not build " + type_name(type));
  if (deps.size() < k.slots.size() || (!k.rest && deps.size() != k.slots.size())) {
    throw DomainError("kind " + k.name + " expects " + std::to_string(k.slots.size()) +
                      " dependencies, got " + std::to_string(deps.size()));
  }
  for (std::size_t i = 0; i < deps.size(); ++i) {
    const Slot s = i < k.slots.size() ? k.slots[i] : *k.rest;
    if (!slot_accepts(s, deps[i])) {
      throw DomainError("kind " + k.name + ": dependency " + std::to_string(i) +
                        " has the wrong type");
    }
  }
  if ((type == Type::element || type == Type::poly) && !parent) {
    throw DomainError(std::string(type_name(type)) + " node needs a parent structure");
  }
  if (min_epoch < 1) throw DomainError("min_epoch must be positive");
  return std::make_shared<Node>(type, kind, std::move(deps), std::move(parent), min_epoch);
}

NodePtr make_user_node(Type type, NodePtr parent, GetApprox fn, std::vector<Dep> deps,
                       std::string name, int min_epoch) {
  auto f = std::make_shared<const UserFunction>(UserFunction{std::move(fn), std::move(name)});
  std::vector<Dep> all;
  all.reserve(deps.size() + 1);
  all.push_back(Dep::value(std::shared_ptr<const UserFunction>(f)));
  for (auto& d : deps) all.push_back(std::move(d));
  static const int kinds[] = {
      KindTable::global().find(Type::ring, "user"),
      KindTable::global().find(Type::element, "user"),
      KindTable::global().find(Type::poly_ring, "user"),
      KindTable::global().find(Type::poly, "user"),
  };
  return make_node(type, kinds[static_cast<int>(type)], std::move(all), std::move(parent),
                   min_epoch);
}

// -------------------------------------------------------------------- Config

Config& config() {
  static Config c = [] {
    Config out;
    if (const char* env = std::getenv("XPADIC_MAX_EPOCH")) {
      const int n = std::atoi(env);
      if (n >= 1) out.max_epoch = n;
    }
    return out;
  }();
  return c;
}

// -------------------------------------------------------------------- Engine

struct Engine {
  static Value call(Node& x, const KindEntry& k, int epoch) {
    std::vector<const Value*> ptrs;
    ptrs.reserve(x.deps_.size());
    for (const Dep& d : x.deps_) {
      ptrs.push_back(d.is_lazy() ? &d.node->cache_[epoch - 1] : &d.constant);
    }
    Config& cfg = config();
    ++cfg.get_approx_calls;
    if (cfg.on_get_approx) cfg.on_get_approx(x, epoch);
    try {
      return k.get_approx(epoch, Args(ptrs));
    } catch (const BudgetExhausted&) {
      throw;
    } catch (const ValidationError& e) {
      rethrow_as(e, where(x, epoch));
    } catch (const PrecisionError& e) {
      rethrow_as(e, where(x, epoch));
    } catch (const DomainError& e) {
      rethrow_as(e, where(x, epoch));
    } catch (const Error& e) {
      rethrow_as(e, where(x, epoch));
    }
  }

  static std::string where(const Node& x, int epoch) {
    return "in " + x.describe() + " at epoch " + std::to_string(epoch);
  }

  static Value restrict(Node& x, const KindEntry& k, const Value& at_min, int epoch) {
    if (k.restrict) {
      std::vector<const Value*> ptrs;
      for (const Dep& d : x.deps_) {
        ptrs.push_back(d.is_lazy() ? &d.node->cache_[epoch - 1] : &d.constant);
      }
      return k.restrict(at_min, epoch, Args(ptrs));
    }
    if (!x.parent_) throw DomainError(x.describe() + " cannot be restricted below min_epoch");
    const Value& pv = x.parent_->cache_[epoch - 1];
    if (x.type_ == Type::element) {
      return std::get<ApproxElement>(at_min).coerce_to(std::get<ApproxRing>(pv));
    }
    if (x.type_ == Type::poly) {
      return std::get<ApproxPoly>(at_min).coerce_to(std::get<PolyRingApprox>(pv).base);
    }
    throw DomainError(x.describe() + " has no restriction below min_epoch");
  }

  static void store(Node& x, Value v, int epoch) {
    if (config().validate) {
      const std::string why = rejection(v, x, epoch);
      if (!why.empty()) throw ValidationError(where(x, epoch) + ": " + why);
    } else if (!holds_type(x.type_, v)) {
      throw ValidationError(where(x, epoch) + ": approximation has the wrong type");
    }
    x.cache_.push_back(std::move(v));
  }

  static void fill(Node& x, int need) {
    const KindEntry& k = KindTable::global().at(x.kind_);
    const int start = x.cached_epochs() + 1;
    std::optional<Value> at_min;
    if (start < x.min_epoch_) at_min = call(x, k, x.min_epoch_);
    for (int i = start; i <= need; ++i) {
      if (i < x.min_epoch_) {
        store(x, restrict(x, k, *at_min, i), i);
      } else if (i == x.min_epoch_ && at_min) {
        store(x, std::move(*at_min), i);
        at_min.reset();
      } else {
        store(x, call(x, k, i), i);
      }
    }
  }
};

const Value& approximation(const NodePtr& x, int n, std::optional<int> budget) {
  const int limit = budget.value_or(config().max_epoch);
  if (n < 1) throw DomainError("epochs start at 1");
  if (n > limit) {
    throw BudgetExhausted("epoch " + std::to_string(n) + " exceeds the budget of " +
                              std::to_string(limit),
                          limit);
  }
  struct Frame {
    Node* node;
    int target;
  };
  std::vector<Frame> stack{{x.get(), n}};
  while (!stack.empty()) {
    const Frame f = stack.back();
    Node& node = *f.node;
    if (node.cached_epochs() >= f.target) {
      stack.pop_back();
      continue;
    }
    const int need = std::max(f.target, node.min_epoch_);
    if (need > limit) {
      throw BudgetExhausted(node.describe() + " needs epoch " + std::to_string(need) +
                                " beyond the budget of " + std::to_string(limit),
                            limit);
    }
    bool ready = true;
    for (const Dep& d : node.deps_) {
      if (d.is_lazy() && d.node->cached_epochs() < need) {
        stack.push_back({d.node.get(), need});
        ready = false;
      }
    }
    if (node.parent_ && node.parent_->cached_epochs() < need) {
      stack.push_back({node.parent_.get(), need});
      ready = false;
    }
    if (!ready) continue;
    Engine::fill(node, need);
    stack.pop_back();
  }
  return x->cache_[n - 1];
}

bool is_valid_approximation(const Value& candidate, const Node& x, int n) {
  return rejection(candidate, x, n).empty();
}

// ------------------------------------------------------------------ Programs

Value StraightLineProgram::run(int epoch, const Args& args) const {
  std::vector<Value> results;
  results.reserve(code.size());
  std::vector<const Value*> slots;
  slots.reserve(args.size() + code.size());
  for (std::size_t i = 0; i < args.size(); ++i) slots.push_back(&args[i]);
  std::vector<const Value*> operands;
  const KindTable& table = KindTable::global();
  for (const Instruction& ins : code) {
    operands.clear();
    for (std::size_t j : ins.operands) operands.push_back(slots[j]);
    results.push_back(table.at(ins.kind).get_approx(epoch, Args(operands)));
    slots.push_back(&results.back());
  }
  return std::move(results.back());
}

NodePtr optimize(const NodePtr& z, const std::vector<NodePtr>& inputs) {
  std::unordered_map<const Node*, std::size_t> input_slot;
  for (std::size_t i = 0; i < inputs.size(); ++i) input_slot.emplace(inputs[i].get(), i);
  if (input_slot.count(z.get())) throw DomainError("optimize: the output is one of the inputs");

  // Post-order over dependencies, stopping at inputs.
  std::vector<const Node*> order;
  std::unordered_set<const Node*> seen;
  struct Frame {
    const Node* node;
    std::size_t next;
  };
  std::vector<Frame> stack{{z.get(), 0}};
  seen.insert(z.get());
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.node->deps().size()) {
      const Dep& d = f.node->deps()[f.next++];
      if (d.is_lazy() && !input_slot.count(d.node.get()) && seen.insert(d.node.get()).second) {
        stack.push_back({d.node.get(), 0});
      }
      continue;
    }
    const Node* node = f.node;
    if (node->type() == Type::element || node->type() == Type::poly) {
      const bool has_value_dep = std::any_of(node->deps().begin(), node->deps().end(), [](const Dep& d) {
        return d.is_lazy() && (d.node->type() == Type::element || d.node->type() == Type::poly);
      });
      if (!has_value_dep && node != z.get()) {
        throw DomainError("optimize: " + node->describe() + " is a source not listed in the inputs");
      }
    }
    order.push_back(node);
    stack.pop_back();
  }

  std::vector<Dep> constants;
  for (const Node* node : order) {
    for (const Dep& d : node->deps()) {
      if (!d.is_lazy()) constants.push_back(d);
    }
  }
  auto program = std::make_shared<StraightLineProgram>();
  program->constant_count = constants.size();
  program->input_count = inputs.size();
  const std::size_t first_code_slot = constants.size() + inputs.size();
  std::unordered_map<const Node*, std::size_t> code_slot;
  std::size_t next_constant = 0;
  int min_epoch = 1;
  for (const Node* node : order) {
    Instruction ins{node->type(), node->kind(), {}};
    for (const Dep& d : node->deps()) {
      if (!d.is_lazy()) {
        ins.operands.push_back(next_constant++);
      } else if (auto it = input_slot.find(d.node.get()); it != input_slot.end()) {
        ins.operands.push_back(constants.size() + it->second);
      } else {
        ins.operands.push_back(code_slot.at(d.node.get()));
      }
    }
    code_slot.emplace(node, first_code_slot + program->code.size());
    program->code.push_back(std::move(ins));
    min_epoch = std::max(min_epoch, node->min_epoch());
  }

  std::vector<Dep> deps;
  deps.reserve(1 + constants.size() + inputs.size());
  deps.push_back(Dep::value(std::shared_ptr<const StraightLineProgram>(program)));
  for (auto& c : constants) deps.push_back(std::move(c));
  for (const auto& in : inputs) deps.push_back(Dep::lazy(in));
  const int kind = KindTable::global().find(z->type(), "program");
  return make_node(z->type(), kind, std::move(deps), z->parent(), min_epoch);
}

}  // namespace xpadic::lazy
