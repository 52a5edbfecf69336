#include "grlab/pddl.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <set>
#include <sstream>

namespace grlab {
namespace {

struct Sexp {
  bool is_list = false;
  std::string sym;  // valid when !is_list
  std::vector<Sexp> items;
  int line = 0;
  int col = 0;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Sexp read_all_one() {
    skip_ws();
    Sexp root = read();
    skip_ws();
    if (pos_ < text_.size()) fail("trailing content after top-level form");
    return root;
  }

 private:
  Sexp read() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    Sexp node;
    node.line = line_;
    node.col = col_;
    if (peek() == '(') {
      advance();
      node.is_list = true;
      while (true) {
        skip_ws();
        if (pos_ >= text_.size()) {
          throw ParseError("unclosed '('", node.line, node.col);
        }
        if (peek() == ')') {
          advance();
          break;
        }
        node.items.push_back(read());
      }
    } else if (peek() == ')') {
      fail("unexpected ')'");
    } else {
      std::string s;
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(peek())) &&
             peek() != '(' && peek() != ')' && peek() != ';') {
        s += static_cast<char>(
            std::tolower(static_cast<unsigned char>(peek())));
        advance();
      }
      node.sym = s;
    }
    return node;
  }

  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col_);
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

[[noreturn]] void fail_at(const Sexp& s, const std::string& msg) {
  throw ParseError(msg, s.line, s.col);
}

const Sexp& expect_list(const Sexp& s, const std::string& what) {
  if (!s.is_list) fail_at(s, "expected " + what + ", got '" + s.sym + "'");
  return s;
}

const std::string& expect_sym(const Sexp& s, const std::string& what) {
  if (s.is_list) fail_at(s, "expected " + what + ", got a list");
  return s.sym;
}

// PDDL typed list: name* [- type] repeated.
std::vector<TypedVar> parse_typed_list(const std::vector<Sexp>& items,
                                       std::size_t begin) {
  std::vector<TypedVar> out;
  std::vector<std::size_t> pending;
  for (std::size_t i = begin; i < items.size(); ++i) {
    const std::string& s = expect_sym(items[i], "name or '-'");
    if (s == "-") {
      if (i + 1 >= items.size()) fail_at(items[i], "dangling '-' in typed list");
      const std::string& ty = expect_sym(items[i + 1], "type name");
      for (std::size_t k : pending) out.push_back({items[k].sym, ty});
      pending.clear();
      ++i;
    } else {
      pending.push_back(i);
    }
  }
  for (std::size_t k : pending) out.push_back({items[k].sym, "object"});
  return out;
}

Atom parse_atom(const Sexp& s) {
  expect_list(s, "atom");
  if (s.items.empty()) fail_at(s, "empty atom");
  Atom a;
  a.pred = expect_sym(s.items[0], "predicate name");
  for (std::size_t i = 1; i < s.items.size(); ++i) {
    a.args.push_back(expect_sym(s.items[i], "atom argument"));
  }
  return a;
}

// Goal description: () | atom | (and GD*). Conjunction of atoms only.
void parse_conjunction(const Sexp& s, std::vector<Atom>* out) {
  expect_list(s, "condition");
  if (s.items.empty()) return;
  const Sexp& head = s.items[0];
  if (!head.is_list && head.sym == "and") {
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      parse_conjunction(s.items[i], out);
    }
  } else if (!head.is_list && head.sym == "not") {
    fail_at(s, "negative conditions are not supported");
  } else {
    out->push_back(parse_atom(s));
  }
}

// Effect: () | literal | (and literal*), literal := atom | (not atom).
void parse_effect(const Sexp& s, std::vector<Atom>* add,
                  std::vector<Atom>* del) {
  expect_list(s, "effect");
  if (s.items.empty()) return;
  const Sexp& head = s.items[0];
  if (!head.is_list && head.sym == "and") {
    for (std::size_t i = 1; i < s.items.size(); ++i) {
      parse_effect(s.items[i], add, del);
    }
  } else if (!head.is_list && head.sym == "not") {
    if (s.items.size() != 2) fail_at(s, "(not ...) takes one atom");
    del->push_back(parse_atom(s.items[1]));
  } else if (head.is_list || head.sym == "when" || head.sym == "forall") {
    fail_at(s, "conditional/quantified effects are not supported");
  } else {
    add->push_back(parse_atom(s));
  }
}

void check_atom_schema(const DomainModel& dom, const Atom& a,
                       const std::vector<TypedVar>& scope,
                       const std::string& where) {
  const Predicate* p = dom.find_predicate(a.pred);
  if (!p) {
    throw ModelError("undeclared predicate '" + a.pred + "' in " + where);
  }
  if (p->params.size() != a.args.size()) {
    throw ModelError("predicate '" + a.pred + "' expects " +
                     std::to_string(p->params.size()) + " arguments, got " +
                     std::to_string(a.args.size()) + " in " + where);
  }
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    const std::string& arg = a.args[i];
    if (arg.size() > 0 && arg[0] == '?') {
      auto it = std::find_if(scope.begin(), scope.end(),
                             [&](const TypedVar& v) { return v.name == arg; });
      if (it == scope.end()) {
        throw ModelError("unbound variable '" + arg + "' in " + where);
      }
      if (!dom.type_ok(it->type, p->params[i].type)) {
        throw ModelError("variable '" + arg + "' of type '" + it->type +
                         "' does not fit parameter of type '" +
                         p->params[i].type + "' in " + where);
      }
    }
  }
}

const std::set<std::string> kSupportedReqs = {":strips", ":typing"};

}  // namespace

DomainModel parse_domain(const std::string& text) {
  Sexp root = Lexer(text).read_all_one();
  expect_list(root, "(define ...)");
  if (root.items.empty() || root.items[0].is_list ||
      root.items[0].sym != "define") {
    fail_at(root, "expected (define (domain ...) ...)");
  }
  DomainModel dom;
  if (root.items.size() < 2 || !root.items[1].is_list ||
      root.items[1].items.size() != 2 ||
      root.items[1].items[0].sym != "domain") {
    fail_at(root, "expected (domain <name>)");
  }
  dom.name = expect_sym(root.items[1].items[1], "domain name");

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Sexp& sec = expect_list(root.items[i], "domain section");
    if (sec.items.empty()) fail_at(sec, "empty domain section");
    const std::string& key = expect_sym(sec.items[0], "section keyword");
    if (key == ":requirements") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const std::string& r = expect_sym(sec.items[k], "requirement flag");
        if (!kSupportedReqs.count(r)) {
          fail_at(sec.items[k], "unsupported requirement '" + r + "'");
        }
        dom.requirements.push_back(r);
      }
    } else if (key == ":types") {
      for (const TypedVar& t : parse_typed_list(sec.items, 1)) {
        dom.type_parent[t.name] = t.type;
      }
    } else if (key == ":predicates") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const Sexp& ps = expect_list(sec.items[k], "predicate declaration");
        if (ps.items.empty()) fail_at(ps, "empty predicate declaration");
        Predicate p;
        p.name = expect_sym(ps.items[0], "predicate name");
        p.params = parse_typed_list(ps.items, 1);
        dom.predicates.push_back(p);
      }
    } else if (key == ":action") {
      if (sec.items.size() < 2) fail_at(sec, "action without a name");
      Operator op;
      op.name = expect_sym(sec.items[1], "action name");
      bool saw_pre = false, saw_eff = false;
      for (std::size_t k = 2; k + 1 < sec.items.size(); k += 2) {
        const std::string& field = expect_sym(sec.items[k], "action keyword");
        const Sexp& val = sec.items[k + 1];
        if (field == ":parameters") {
          op.params = parse_typed_list(expect_list(val, "parameter list").items, 0);
        } else if (field == ":precondition") {
          parse_conjunction(val, &op.pre);
          saw_pre = true;
        } else if (field == ":effect") {
          parse_effect(val, &op.add, &op.del);
          saw_eff = true;
        } else {
          fail_at(sec.items[k], "unknown action field '" + field + "'");
        }
      }
      if (!saw_pre) fail_at(sec, "action '" + op.name + "' lacks :precondition");
      if (!saw_eff) fail_at(sec, "action '" + op.name + "' lacks :effect");
      dom.operators.push_back(std::move(op));
    } else {
      fail_at(sec, "unsupported domain section '" + key + "'");
    }
  }

  // Semantic checks.
  for (const auto& [ty, parent] : dom.type_parent) {
    if (parent != "object" && !dom.type_parent.count(parent)) {
      throw ModelError("type '" + ty + "' has undeclared parent '" + parent +
                       "'");
    }
  }
  std::set<std::string> pred_names;
  for (const auto& p : dom.predicates) {
    if (!pred_names.insert(p.name).second) {
      throw ModelError("duplicate predicate '" + p.name + "'");
    }
    for (const auto& v : p.params) {
      if (!dom.type_declared(v.type)) {
        throw ModelError("predicate '" + p.name + "' uses undeclared type '" +
                         v.type + "'");
      }
    }
  }
  std::set<std::string> op_names;
  for (const auto& op : dom.operators) {
    if (!op_names.insert(op.name).second) {
      throw ModelError("duplicate operator '" + op.name + "'");
    }
    for (const auto& v : op.params) {
      if (!dom.type_declared(v.type)) {
        throw ModelError("operator '" + op.name + "' uses undeclared type '" +
                         v.type + "'");
      }
    }
    for (const auto& a : op.pre) {
      check_atom_schema(dom, a, op.params, "precondition of '" + op.name + "'");
    }
    for (const auto& a : op.add) {
      check_atom_schema(dom, a, op.params, "effect of '" + op.name + "'");
    }
    for (const auto& a : op.del) {
      check_atom_schema(dom, a, op.params, "effect of '" + op.name + "'");
    }
  }
  return dom;
}

ProblemSpec parse_problem(const std::string& text, const DomainModel& dom) {
  Sexp root = Lexer(text).read_all_one();
  expect_list(root, "(define ...)");
  if (root.items.empty() || root.items[0].is_list ||
      root.items[0].sym != "define") {
    fail_at(root, "expected (define (problem ...) ...)");
  }
  ProblemSpec prob;
  if (root.items.size() < 2 || !root.items[1].is_list ||
      root.items[1].items.size() != 2 ||
      root.items[1].items[0].sym != "problem") {
    fail_at(root, "expected (problem <name>)");
  }
  prob.name = expect_sym(root.items[1].items[1], "problem name");

  for (std::size_t i = 2; i < root.items.size(); ++i) {
    const Sexp& sec = expect_list(root.items[i], "problem section");
    if (sec.items.empty()) fail_at(sec, "empty problem section");
    const std::string& key = expect_sym(sec.items[0], "section keyword");
    if (key == ":domain") {
      if (sec.items.size() != 2) fail_at(sec, "(:domain <name>)");
      prob.domain_name = expect_sym(sec.items[1], "domain name");
    } else if (key == ":objects") {
      prob.objects = parse_typed_list(sec.items, 1);
    } else if (key == ":init") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        prob.init.push_back(parse_atom(sec.items[k]));
      }
    } else if (key == ":goal") {
      if (sec.items.size() != 2) fail_at(sec, "(:goal <condition>)");
      parse_conjunction(sec.items[1], &prob.goal);
    } else if (key == ":candidates") {
      for (std::size_t k = 1; k < sec.items.size(); ++k) {
        const Sexp& cand = expect_list(sec.items[k], "candidate goal");
        std::vector<Atom> atoms;
        for (const Sexp& a : cand.items) atoms.push_back(parse_atom(a));
        prob.candidates.push_back(std::move(atoms));
      }
    } else {
      fail_at(sec, "unsupported problem section '" + key + "'");
    }
  }

  if (prob.domain_name != dom.name) {
    throw ModelError("problem references domain '" + prob.domain_name +
                     "' but '" + dom.name + "' was given");
  }
  for (const auto& o : prob.objects) {
    if (!dom.type_declared(o.type)) {
      throw ModelError("object '" + o.name + "' has undeclared type '" +
                       o.type + "'");
    }
  }

  auto check_ground_atom = [&](const Atom& a, const std::string& where) {
    const Predicate* p = dom.find_predicate(a.pred);
    if (!p) {
      throw ModelError("undeclared predicate '" + a.pred + "' in " + where);
    }
    if (p->params.size() != a.args.size()) {
      throw ModelError("predicate '" + a.pred + "' arity mismatch in " + where);
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      const TypedVar* obj = prob.find_object(a.args[i]);
      if (!obj) {
        throw ModelError("unknown object '" + a.args[i] + "' in " + where);
      }
      if (!dom.type_ok(obj->type, p->params[i].type)) {
        throw ModelError("object '" + a.args[i] + "' of type '" + obj->type +
                         "' does not fit '" + p->params[i].type + "' in " +
                         where);
      }
    }
  };
  for (const auto& a : prob.init) check_ground_atom(a, ":init");
  for (const auto& a : prob.goal) check_ground_atom(a, ":goal");
  for (const auto& cand : prob.candidates) {
    for (const auto& a : cand) check_ground_atom(a, ":candidates");
  }
  return prob;
}

namespace {

void print_typed_list(std::ostream& os, const std::vector<TypedVar>& vars) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) os << " ";
    os << vars[i].name << " - " << vars[i].type;
  }
}

void print_atoms(std::ostream& os, const std::vector<Atom>& atoms,
                 const char* sep = " ") {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i) os << sep;
    os << atoms[i].str();
  }
}

}  // namespace

std::string print_domain(const DomainModel& dom) {
  std::ostringstream os;
  os << "(define (domain " << dom.name << ")\n";
  if (!dom.requirements.empty()) {
    os << "  (:requirements";
    for (const auto& r : dom.requirements) os << " " << r;
    os << ")\n";
  }
  if (!dom.type_parent.empty()) {
    os << "  (:types";
    for (const auto& [ty, parent] : dom.type_parent) {
      os << " " << ty << " - " << parent;
    }
    os << ")\n";
  }
  if (!dom.predicates.empty()) {
    os << "  (:predicates";
    for (const auto& p : dom.predicates) {
      os << "\n    (" << p.name;
      if (!p.params.empty()) {
        os << " ";
        print_typed_list(os, p.params);
      }
      os << ")";
    }
    os << ")\n";
  }
  for (const auto& op : dom.operators) {
    os << "  (:action " << op.name << "\n    :parameters (";
    print_typed_list(os, op.params);
    os << ")\n    :precondition (and ";
    print_atoms(os, op.pre);
    os << ")\n    :effect (and ";
    print_atoms(os, op.add);
    for (const auto& d : op.del) os << " (not " << d.str() << ")";
    os << "))\n";
  }
  os << ")\n";
  return os.str();
}

std::string print_problem(const ProblemSpec& prob) {
  std::ostringstream os;
  os << "(define (problem " << prob.name << ")\n  (:domain "
     << prob.domain_name << ")\n  (:objects ";
  print_typed_list(os, prob.objects);
  os << ")\n  (:init ";
  print_atoms(os, prob.init);
  os << ")\n  (:goal (and ";
  print_atoms(os, prob.goal);
  os << "))\n";
  if (!prob.candidates.empty()) {
    os << "  (:candidates";
    for (const auto& cand : prob.candidates) {
      os << "\n    (";
      print_atoms(os, cand);
      os << ")";
    }
    os << ")\n";
  }
  os << ")\n";
  return os.str();
}

}  // namespace grlab
