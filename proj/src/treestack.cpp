#include "tsa/treestack.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace tsa {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

struct TreeStack::Node {
  std::string symbol;
  std::vector<std::pair<int, NodePtr>> children;  // sorted by index
  std::size_t hash = 0;
  std::size_t size = 1;

  Node(std::string sym, std::vector<std::pair<int, NodePtr>> kids)
      : symbol(std::move(sym)), children(std::move(kids)) {
    hash = std::hash<std::string>{}(symbol);
    for (const auto& [index, child] : children) {
      hash = mix(hash, static_cast<std::size_t>(index));
      hash = mix(hash, child->hash);
      size += child->size;
    }
  }

  const Node* child(int index) const {
    auto it = std::lower_bound(
        children.begin(), children.end(), index,
        [](const auto& entry, int i) { return entry.first < i; });
    if (it == children.end() || it->first != index) return nullptr;
    return it->second.get();
  }
};

namespace {

bool same_tree(const auto& a, const auto& b) {
  if (a == b) return true;
  if (a->hash != b->hash || a->size != b->size || a->symbol != b->symbol ||
      a->children.size() != b->children.size())
    return false;
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (a->children[i].first != b->children[i].first) return false;
    if (!same_tree(a->children[i].second, b->children[i].second)) return false;
  }
  return true;
}

}  // namespace

std::string render_position(const Position& p) {
  if (p.empty()) return "ε";
  const bool wide = std::any_of(p.begin(), p.end(), [](int i) { return i > 9; });
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (wide && i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

std::string render_predicate(const Predicate& p) {
  if (std::holds_alternative<pred::True>(p)) return "true";
  if (std::holds_alternative<pred::Bottom>(p)) return "bottom";
  return "eq(" + std::get<pred::Equals>(p).symbol + ")";
}

std::string render_instruction(const Instruction& f) {
  if (std::holds_alternative<instr::Id>(f)) return "id";
  if (const auto* push = std::get_if<instr::Push>(&f))
    return "push(" + std::to_string(push->child) + "," + push->symbol + ")";
  if (const auto* up = std::get_if<instr::Up>(&f))
    return "up(" + std::to_string(up->child) + ")";
  if (std::holds_alternative<instr::Down>(f)) return "down";
  return "set(" + std::get<instr::Set>(f).symbol + ")";
}

bool predicate_admits(const Predicate& p, const std::string& symbol) {
  if (std::holds_alternative<pred::True>(p)) return true;
  if (std::holds_alternative<pred::Bottom>(p)) return symbol == kRootSymbol;
  return std::get<pred::Equals>(p).symbol == symbol;
}

bool moves_up(const Instruction& f) {
  return std::holds_alternative<instr::Push>(f) ||
         std::holds_alternative<instr::Up>(f);
}

bool is_stay(const Instruction& f) {
  return std::holds_alternative<instr::Id>(f) ||
         std::holds_alternative<instr::Set>(f);
}

TreeStack::TreeStack()
    : root_(std::make_shared<const Node>(kRootSymbol,
                                         std::vector<std::pair<int, NodePtr>>{})) {}

TreeStack::TreeStack(NodePtr root, Position pointer)
    : root_(std::move(root)), pointer_(std::move(pointer)) {}

const TreeStack::Node& TreeStack::node_at_pointer() const {
  const Node* n = root_.get();
  for (int i : pointer_) n = n->child(i);
  return *n;
}

const std::string& TreeStack::current_symbol() const {
  return node_at_pointer().symbol;
}

bool TreeStack::contains(const Position& p) const {
  return symbol_at(p).has_value();
}

std::optional<std::string> TreeStack::symbol_at(const Position& p) const {
  const Node* n = root_.get();
  for (int i : p) {
    n = n->child(i);
    if (!n) return std::nullopt;
  }
  return n->symbol;
}

std::size_t TreeStack::node_count() const { return root_->size; }

std::map<Position, std::string> TreeStack::nodes() const {
  std::map<Position, std::string> out;
  Position path;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    out.emplace(path, n.symbol);
    for (const auto& [index, child] : n.children) {
      path.push_back(index);
      walk(*child);
      path.pop_back();
    }
  };
  walk(*root_);
  return out;
}

bool TreeStack::satisfies(const Predicate& p) const {
  return predicate_admits(p, current_symbol());
}

TreeStack::NodePtr TreeStack::rebuild(const Node& node, const Position& path,
                                      std::size_t depth,
                                      const std::string* set_symbol,
                                      const instr::Push* push) {
  if (depth == path.size()) {
    auto children = node.children;
    if (push) {
      auto leaf = std::make_shared<const Node>(
          push->symbol, std::vector<std::pair<int, NodePtr>>{});
      auto it = std::lower_bound(
          children.begin(), children.end(), push->child,
          [](const auto& entry, int i) { return entry.first < i; });
      children.insert(it, {push->child, std::move(leaf)});
    }
    return std::make_shared<const Node>(set_symbol ? *set_symbol : node.symbol,
                                        std::move(children));
  }
  auto children = node.children;
  for (auto& [index, child] : children) {
    if (index == path[depth]) {
      child = rebuild(*child, path, depth + 1, set_symbol, push);
      break;
    }
  }
  return std::make_shared<const Node>(node.symbol, std::move(children));
}

std::optional<TreeStack> TreeStack::apply(const Instruction& f) const {
  if (std::holds_alternative<instr::Id>(f)) return *this;

  if (const auto* push = std::get_if<instr::Push>(&f)) {
    if (push->child < 1 || push->symbol == kRootSymbol) return std::nullopt;
    if (node_at_pointer().child(push->child)) return std::nullopt;
    Position next = pointer_;
    next.push_back(push->child);
    return TreeStack(rebuild(*root_, pointer_, 0, nullptr, push), std::move(next));
  }

  if (const auto* up = std::get_if<instr::Up>(&f)) {
    if (!node_at_pointer().child(up->child)) return std::nullopt;
    Position next = pointer_;
    next.push_back(up->child);
    return TreeStack(root_, std::move(next));
  }

  if (std::holds_alternative<instr::Down>(f)) {
    if (pointer_.empty()) return std::nullopt;
    Position next = pointer_;
    next.pop_back();
    return TreeStack(root_, std::move(next));
  }

  const auto& set = std::get<instr::Set>(f);
  if (pointer_.empty() || set.symbol == kRootSymbol) return std::nullopt;
  return TreeStack(rebuild(*root_, pointer_, 0, &set.symbol, nullptr), pointer_);
}

std::string TreeStack::render() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [pos, sym] : nodes()) {
    if (!first) out += ", ";
    first = false;
    const std::string entry = "(" + render_position(pos) + "," + sym + ")";
    out += pos == pointer_ ? "[" + entry + "]" : entry;
  }
  return out + "}";
}

std::size_t TreeStack::hash() const {
  std::size_t h = root_->hash;
  for (int i : pointer_) h = mix(h, static_cast<std::size_t>(i) * 31 + 7);
  return mix(h, pointer_.size());
}

bool operator==(const TreeStack& a, const TreeStack& b) {
  return a.pointer_ == b.pointer_ && same_tree(a.root_, b.root_);
}

TreeStack TreeStack::from_nodes(const std::map<Position, std::string>& nodes,
                                const Position& pointer) {
  auto root = nodes.find(Position{});
  if (root == nodes.end() || root->second != kRootSymbol)
    throw std::invalid_argument("tree stack root must carry @");
  for (const auto& [pos, sym] : nodes) {
    if (pos.empty()) continue;
    if (sym == kRootSymbol)
      throw std::invalid_argument("@ may only occur at the root");
    if (std::any_of(pos.begin(), pos.end(), [](int i) { return i < 1; }))
      throw std::invalid_argument("positions use positive indices");
    Position parent(pos.begin(), pos.end() - 1);
    if (!nodes.contains(parent))
      throw std::invalid_argument("domain is not prefix-closed at " +
                                  render_position(pos));
  }
  if (!nodes.contains(pointer))
    throw std::invalid_argument("pointer outside the domain");

  std::function<NodePtr(const Position&)> build = [&](const Position& at) {
    std::vector<std::pair<int, NodePtr>> children;
    // children of `at` are the entries at + [i]; std::map keeps them sorted
    Position lo = at;
    lo.push_back(0);
    for (auto it = nodes.upper_bound(lo); it != nodes.end(); ++it) {
      const Position& p = it->first;
      if (p.size() <= at.size() || !std::equal(at.begin(), at.end(), p.begin()))
        break;
      if (p.size() == at.size() + 1) children.emplace_back(p.back(), build(p));
    }
    return std::make_shared<const Node>(nodes.at(at), std::move(children));
  };
  return TreeStack(build(Position{}), pointer);
}

}  // namespace tsa
