#pragma once

// Minimal PENMAN reader for the AMR scaffolds the builder asks models for.
// Handles variables, concepts, roles, re-entrant variables, quoted strings
// and bare constants. No alignment markers or metadata comments.

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "confuse/error.hpp"

namespace confuse::amr {

struct Node;

// A role target: nested node, reference to an earlier variable, or a constant.
struct Reference {
  std::string var;
};
struct Constant {
  std::string value;
  bool quoted = false;
};
using Target = std::variant<std::unique_ptr<Node>, Reference, Constant>;

struct Edge {
  std::string role;  // without the leading ':'
  Target target;
};

struct Node {
  std::string var;
  std::string concept_name;
  std::vector<Edge> edges;
};

namespace detail {

class Reader {
 public:
  explicit Reader(std::string_view s) : s_(s) {}

  std::unique_ptr<Node> graph() {
    skip();
    auto n = node();
    skip();
    if (pos_ != s_.size()) fail("trailing text after graph");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParameterError("AMR parse error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool at(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!at(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string symbol() {
    skip();
    std::size_t b = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == ':' || c == '/' || c == '"') break;
      ++pos_;
    }
    if (pos_ == b) fail("expected a symbol");
    return std::string(s_.substr(b, pos_ - b));
  }

  std::string quoted() {
    expect('"');
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\' && pos_ + 1 < s_.size()) ++pos_;
      out.push_back(s_[pos_++]);
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return out;
  }

  std::unique_ptr<Node> node() {
    expect('(');
    auto n = std::make_unique<Node>();
    n->var = symbol();
    expect('/');
    n->concept_name = symbol();
    while (at(':')) {
      ++pos_;
      Edge e;
      e.role = symbol();
      if (at('(')) {
        e.target = node();
      } else if (at('"')) {
        e.target = Constant{quoted(), true};
      } else {
        std::string sym = symbol();
        if (sym.empty()) fail("empty role target");
        e.target = Constant{std::move(sym), false};
      }
      n->edges.push_back(std::move(e));
    }
    expect(')');
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

class Graph {
 public:
  static Graph parse(std::string_view penman) {
    Graph g;
    g.root_ = detail::Reader(penman).graph();
    std::set<std::string> vars;
    g.collect(*g.root_, vars);
    g.resolve_references(*g.root_, vars);
    return g;
  }

  const Node& root() const { return *root_; }

  // Concepts in depth-first order, e.g. {"want-01", "boy", "believe-01", "girl"}.
  std::vector<std::string> concepts() const {
    std::vector<std::string> out;
    walk(*root_, [&](const Node& n) { out.push_back(n.concept_name); });
    return out;
  }

  std::vector<std::string> variables() const {
    std::vector<std::string> out;
    walk(*root_, [&](const Node& n) { out.push_back(n.var); });
    return out;
  }

  // Number of edges pointing back to an already-introduced variable.
  std::size_t reentrancies() const {
    std::size_t n = 0;
    walk(*root_, [&](const Node& node) {
      for (const auto& e : node.edges) n += std::holds_alternative<Reference>(e.target);
    });
    return n;
  }

 private:
  template <typename Fn>
  static void walk(const Node& n, Fn&& fn) {
    fn(n);
    for (const auto& e : n.edges) {
      if (auto* child = std::get_if<std::unique_ptr<Node>>(&e.target)) walk(**child, fn);
    }
  }

  void collect(const Node& n, std::set<std::string>& vars) const {
    if (!vars.insert(n.var).second) throw ParameterError("AMR variable '" + n.var + "' defined twice");
    for (const auto& e : n.edges) {
      if (auto* child = std::get_if<std::unique_ptr<Node>>(&e.target)) collect(**child, vars);
    }
  }

  // Bare symbols that name a variable become references.
  static void resolve_references(Node& n, const std::set<std::string>& vars) {
    for (auto& e : n.edges) {
      if (auto* child = std::get_if<std::unique_ptr<Node>>(&e.target)) {
        resolve_references(**child, vars);
      } else if (auto* c = std::get_if<Constant>(&e.target); c && !c->quoted && vars.count(c->value)) {
        e.target = Reference{c->value};
      }
    }
  }

  std::unique_ptr<Node> root_;
};

}  // namespace confuse::amr
