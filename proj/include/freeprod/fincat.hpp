#pragma once

// Finitely presented categories with a bounded word problem.
//
// A presentation is a finite generating graph plus relations between
// parallel words.  Equality of words is decided by congruence closure over
// the finite universe of words of length <= bound: two words are equal iff
// they are connected by relation rewrites all of whose intermediate words
// also fit under the bound.  That procedure is sound, and complete for
// classes whose rewrite chains stay under the bound; queries that leave the
// universe raise bound_exhausted_error, enumerations carry an `exhausted`
// flag instead of guessing.

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"

namespace freeprod {

// ---------------------------------------------------------------------------
// Graphs and words.

struct FinGraph {
  struct Edge {
    std::string label, src, tgt;
  };
  std::vector<std::string> objects;
  std::vector<Edge> edges;

  bool has_object(const std::string& o) const {
    return std::find(objects.begin(), objects.end(), o) != objects.end();
  }
  std::size_t edge_index(const std::string& label) const {
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].label == label) return i;
    throw precondition_error("unknown edge label: " + label);
  }
  std::vector<std::size_t> edges_from(const std::string& o) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < edges.size(); ++i)
      if (edges[i].src == o) out.push_back(i);
    return out;
  }
  void validate() const {
    std::set<std::string> seen_obj(objects.begin(), objects.end());
    if (seen_obj.size() != objects.size())
      throw precondition_error("duplicate object name in graph");
    std::set<std::string> seen_lbl;
    for (auto& e : edges) {
      if (!has_object(e.src) || !has_object(e.tgt))
        throw precondition_error("edge " + e.label + " has unknown endpoint");
      if (!seen_lbl.insert(e.label).second)
        throw precondition_error("duplicate edge label: " + e.label);
    }
  }
};

// A typed word: a path in the generating graph, kept with its endpoints so
// empty words know where they sit.
struct Word {
  std::string src, tgt;
  std::vector<std::uint32_t> gens;

  std::size_t size() const { return gens.size(); }
  bool empty() const { return gens.empty(); }

  friend bool operator==(const Word& a, const Word& b) {
    return a.gens == b.gens && a.src == b.src && a.tgt == b.tgt;
  }
  // Shortest first, then lexicographic on generator indices: the minimum of
  // a class under this order is its canonical representative.
  friend bool operator<(const Word& a, const Word& b) {
    if (a.gens.size() != b.gens.size()) return a.gens.size() < b.gens.size();
    if (a.gens != b.gens) return a.gens < b.gens;
    if (a.src != b.src) return a.src < b.src;
    return a.tgt < b.tgt;
  }
};

inline Word empty_word(const std::string& obj) { return Word{obj, obj, {}}; }

inline Word word_of_edges(const FinGraph& g, const std::vector<std::uint32_t>& gens) {
  if (gens.empty()) throw precondition_error("word_of_edges needs a nonempty path");
  Word w;
  w.gens = gens;
  w.src = g.edges[gens.front()].src;
  w.tgt = g.edges[gens.back()].tgt;
  for (std::size_t i = 0; i + 1 < gens.size(); ++i)
    if (g.edges[gens[i]].tgt != g.edges[gens[i + 1]].src)
      throw precondition_error("word is not a path");
  return w;
}

inline Word concat(const Word& u, const Word& v) {
  if (u.tgt != v.src) throw precondition_error("concat: endpoint mismatch");
  Word w{u.src, v.tgt, u.gens};
  w.gens.insert(w.gens.end(), v.gens.begin(), v.gens.end());
  return w;
}

inline std::string word_str(const FinGraph& g, const Word& w) {
  if (w.empty()) return "id(" + w.src + ")";
  std::string s;
  for (std::size_t i = 0; i < w.gens.size(); ++i) {
    if (i) s += ";";
    s += g.edges[w.gens[i]].label;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Finite categories given by full composition tables.

struct FinMor {
  std::string label, src, tgt;

  friend bool operator==(const FinMor& a, const FinMor& b) {
    return a.label == b.label && a.src == b.src && a.tgt == b.tgt;
  }
  friend bool operator<(const FinMor& a, const FinMor& b) {
    return std::tie(a.label, a.src, a.tgt) < std::tie(b.label, b.src, b.tgt);
  }
};

struct FinCategory {
  std::vector<std::string> objects;
  std::vector<FinMor> morphisms;
  // then[{f,g}] = index of "f followed by g" (diagrammatic), defined exactly
  // when tgt(f) == src(g).
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> comp;
  std::map<std::string, std::size_t> identities;  // object -> morphism index

  std::size_t mor_index(const std::string& label) const {
    for (std::size_t i = 0; i < morphisms.size(); ++i)
      if (morphisms[i].label == label) return i;
    throw precondition_error("unknown morphism label: " + label);
  }
  std::size_t then(std::size_t f, std::size_t g) const {
    auto it = comp.find({f, g});
    if (it == comp.end()) throw precondition_error("composite undefined");
    return it->second;
  }
  std::size_t id(const std::string& obj) const {
    auto it = identities.find(obj);
    if (it == identities.end()) throw precondition_error("no identity for " + obj);
    return it->second;
  }
  bool is_identity(std::size_t m) const {
    auto it = identities.find(morphisms[m].src);
    return it != identities.end() && it->second == m;
  }
  std::vector<std::size_t> hom(const std::string& a, const std::string& b) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < morphisms.size(); ++i)
      if (morphisms[i].src == a && morphisms[i].tgt == b) out.push_back(i);
    return out;
  }
  bool has_object(const std::string& o) const {
    return std::find(objects.begin(), objects.end(), o) != objects.end();
  }

  friend bool operator==(const FinCategory& a, const FinCategory& b) {
    return a.objects == b.objects && a.morphisms == b.morphisms && a.comp == b.comp &&
           a.identities == b.identities;
  }
  friend bool operator<(const FinCategory& a, const FinCategory& b) {
    if (!(a.objects == b.objects)) return a.objects < b.objects;
    if (!(a.morphisms == b.morphisms)) return a.morphisms < b.morphisms;
    if (!(a.comp == b.comp)) return a.comp < b.comp;
    return a.identities < b.identities;
  }
};

// Exhaustive check of the category axioms; violations are returned as data.
inline Report validate_fin_category(const FinCategory& c) {
  Report rep;
  auto& typing = rep.add("typing");
  for (auto& m : c.morphisms) {
    ++typing.instances;
    if (!c.has_object(m.src) || !c.has_object(m.tgt))
      typing.fail_case("morphism " + m.label + " has unknown endpoint");
  }
  auto& ids = rep.add("identities");
  for (auto& o : c.objects) {
    ++ids.instances;
    auto it = c.identities.find(o);
    if (it == c.identities.end()) {
      ids.fail_case("missing identity for " + o);
      continue;
    }
    auto& m = c.morphisms[it->second];
    if (m.src != o || m.tgt != o)
      ids.fail_case("identity of " + o + " has wrong endpoints");
  }
  auto& comp_def = rep.add("composition-totality");
  for (std::size_t f = 0; f < c.morphisms.size(); ++f)
    for (std::size_t g = 0; g < c.morphisms.size(); ++g) {
      bool composable = c.morphisms[f].tgt == c.morphisms[g].src;
      bool defined = c.comp.count({f, g}) != 0;
      ++comp_def.instances;
      if (composable != defined) {
        comp_def.fail_case("composite " + c.morphisms[f].label + ";" +
                           c.morphisms[g].label +
                           (composable ? " missing" : " defined but not composable"));
      } else if (defined) {
        auto& h = c.morphisms[c.comp.at({f, g})];
        if (h.src != c.morphisms[f].src || h.tgt != c.morphisms[g].tgt)
          comp_def.fail_case("composite " + c.morphisms[f].label + ";" +
                             c.morphisms[g].label + " has wrong endpoints");
      }
    }
  if (!comp_def.violations.empty()) return rep;  // tables unusable below
  auto& unit = rep.add("unit-laws");
  for (std::size_t f = 0; f < c.morphisms.size(); ++f) {
    ++unit.instances;
    auto& m = c.morphisms[f];
    if (!c.identities.count(m.src) || !c.identities.count(m.tgt)) continue;
    if (c.then(c.id(m.src), f) != f || c.then(f, c.id(m.tgt)) != f)
      unit.fail_case("unit law fails at " + m.label);
  }
  auto& assoc = rep.add("associativity");
  for (std::size_t f = 0; f < c.morphisms.size(); ++f)
    for (std::size_t g = 0; g < c.morphisms.size(); ++g) {
      if (c.morphisms[f].tgt != c.morphisms[g].src) continue;
      for (std::size_t h = 0; h < c.morphisms.size(); ++h) {
        if (c.morphisms[g].tgt != c.morphisms[h].src) continue;
        ++assoc.instances;
        if (c.then(c.then(f, g), h) != c.then(f, c.then(g, h)))
          assoc.fail_case("associativity fails at " + c.morphisms[f].label + ";" +
                          c.morphisms[g].label + ";" + c.morphisms[h].label);
      }
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Small builders.

inline FinCategory discrete_category(const std::vector<std::string>& objects) {
  FinCategory c;
  c.objects = objects;
  for (auto& o : objects) {
    c.identities[o] = c.morphisms.size();
    c.morphisms.push_back({"id(" + o + ")", o, o});
  }
  for (std::size_t i = 0; i < c.morphisms.size(); ++i)
    c.comp[{i, i}] = i;
  return c;
}

inline FinCategory terminal_category() { return discrete_category({"*"}); }

// 0 --f--> 1
inline FinCategory walking_arrow() {
  FinCategory c;
  c.objects = {"0", "1"};
  c.morphisms = {{"id(0)", "0", "0"}, {"id(1)", "1", "1"}, {"f", "0", "1"}};
  c.identities = {{"0", 0}, {"1", 1}};
  c.comp[{0, 0}] = 0;
  c.comp[{1, 1}] = 1;
  c.comp[{0, 2}] = 2;
  c.comp[{2, 1}] = 2;
  return c;
}

// One-object category from a monoid given by its multiplication table.
// mult[{a,b}] = "a then b".
inline FinCategory monoid_category(const std::vector<std::string>& elems,
                                   const std::string& unit,
                                   const std::map<std::pair<std::string, std::string>, std::string>& mult) {
  FinCategory c;
  c.objects = {"*"};
  for (auto& e : elems) c.morphisms.push_back({e, "*", "*"});
  c.identities["*"] = c.mor_index(unit);
  for (auto& a : elems)
    for (auto& b : elems)
      c.comp[{c.mor_index(a), c.mor_index(b)}] = c.mor_index(mult.at({a, b}));
  return c;
}

inline FinCategory cyclic_group_category(std::size_t n, const std::string& gen = "a") {
  std::vector<std::string> elems;
  std::map<std::pair<std::string, std::string>, std::string> mult;
  auto name = [&](std::size_t k) {
    if (k == 0) return std::string("e");
    std::string s;
    for (std::size_t i = 0; i < k; ++i) s += gen;
    return s;
  };
  for (std::size_t k = 0; k < n; ++k) elems.push_back(name(k));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      mult[{name(i), name(j)}] = name((i + j) % n);
  return monoid_category(elems, "e", mult);
}

inline FinCategory product_category(const std::vector<FinCategory>& cs) {
  FinCategory out;
  std::vector<std::size_t> obj_radix, mor_radix;
  for (auto& c : cs) {
    obj_radix.push_back(c.objects.size());
    mor_radix.push_back(c.morphisms.size());
  }
  auto tuple_name = [](const std::vector<std::string>& parts) {
    std::string s = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) s += ",";
      s += parts[i];
    }
    return s + ")";
  };
  for_each_tuple(obj_radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> parts;
    for (std::size_t j = 0; j < cs.size(); ++j) parts.push_back(cs[j].objects[idx[j]]);
    out.objects.push_back(tuple_name(parts));
    return true;
  });
  guard(out.objects.size() <= 10000, "product category too many objects");
  std::vector<std::vector<std::size_t>> mor_tuples;
  for_each_tuple(mor_radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> lbl, src, tgt;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      lbl.push_back(cs[j].morphisms[idx[j]].label);
      src.push_back(cs[j].morphisms[idx[j]].src);
      tgt.push_back(cs[j].morphisms[idx[j]].tgt);
    }
    mor_tuples.push_back(idx);
    out.morphisms.push_back({tuple_name(lbl), tuple_name(src), tuple_name(tgt)});
    return true;
  });
  guard(out.morphisms.size() <= 100000, "product category too many morphisms");
  std::map<std::vector<std::size_t>, std::size_t> mor_index;
  for (std::size_t i = 0; i < mor_tuples.size(); ++i) mor_index[mor_tuples[i]] = i;
  for (std::size_t f = 0; f < mor_tuples.size(); ++f)
    for (std::size_t g = 0; g < mor_tuples.size(); ++g) {
      bool composable = true;
      std::vector<std::size_t> comp_tuple(cs.size());
      for (std::size_t j = 0; j < cs.size() && composable; ++j) {
        auto it = cs[j].comp.find({mor_tuples[f][j], mor_tuples[g][j]});
        if (it == cs[j].comp.end())
          composable = false;
        else
          comp_tuple[j] = it->second;
      }
      if (composable) out.comp[{f, g}] = mor_index.at(comp_tuple);
    }
  // identity tuples
  for_each_tuple(obj_radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::size_t> ids(cs.size());
    std::vector<std::string> parts;
    for (std::size_t j = 0; j < cs.size(); ++j) {
      parts.push_back(cs[j].objects[idx[j]]);
      ids[j] = cs[j].id(cs[j].objects[idx[j]]);
    }
    out.identities[tuple_name(parts)] = mor_index.at(ids);
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Presented categories.

struct WordEqualityBound {
  std::size_t max_word_length = 4;
};

struct PresentedCategory {
  FinGraph gens;
  std::vector<std::pair<Word, Word>> relations;
  // Optional confluent rewriting to normal form; when set it replaces
  // congruence closure as the equality decision.
  std::function<Word(const Word&)> normalizer;

  void validate() const {
    gens.validate();
    for (auto& [l, r] : relations) {
      check_word(l);
      check_word(r);
      if (l.src != r.src || l.tgt != r.tgt)
        throw precondition_error("relation sides are not parallel");
    }
  }
  void check_word(const Word& w) const {
    std::string at = w.src;
    if (!gens.has_object(w.src)) throw precondition_error("word at unknown object");
    for (auto g : w.gens) {
      if (g >= gens.edges.size()) throw precondition_error("word uses unknown generator");
      if (gens.edges[g].src != at) throw precondition_error("word is not a path");
      at = gens.edges[g].tgt;
    }
    if (at != w.tgt) throw precondition_error("word target mismatch");
  }
};

inline PresentedCategory free_category(const FinGraph& g) {
  g.validate();
  PresentedCategory p;
  p.gens = g;
  p.normalizer = [](const Word& w) { return w; };
  return p;
}

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

}  // namespace detail

// Equality decision for a presentation at a fixed bound.  Enumerates every
// word of length <= bound once and closes the relation rewrites inside that
// universe with union-find.
class WordEquality {
 public:
  WordEquality(PresentedCategory p, WordEqualityBound bound,
               std::size_t max_words = 2000000)
      : pres_(std::move(p)), bound_(bound.max_word_length) {
    pres_.validate();
    if (pres_.normalizer) return;  // normal forms decide equality directly
    enumerate(max_words);
    close();
  }

  const PresentedCategory& presentation() const { return pres_; }
  std::size_t bound() const { return bound_; }
  bool closure_overflowed() const { return overflow_; }

  // Canonical representative of the class of w: the normalizer output when
  // present, otherwise the minimal word merged with w under the bound.
  Word canonical(const Word& w) const {
    pres_.check_word(w);
    if (pres_.normalizer) {
      Word n = pres_.normalizer(w);
      pres_.check_word(n);
      return n;
    }
    if (w.size() > bound_)
      throw bound_exhausted_error("word longer than equality bound");
    return words_[canon_[uf_->find(index_.at(w))]];
  }

  bool equal(const Word& u, const Word& v) const {
    if (u.src != v.src || u.tgt != v.tgt) return false;
    return canonical(u) == canonical(v);
  }

  // Distinct classes of words a -> b under the bound, canonical reps in
  // deterministic order.  `exhausted` is set when longer words could change
  // the answer: either a strictly longer path exists or a rewrite left the
  // universe while closing.
  Bounded<std::vector<Word>> hom_classes(const std::string& a, const std::string& b) const {
    Bounded<std::vector<Word>> out;
    if (pres_.normalizer) {
      std::set<Word> reps;
      for_each_word(a, [&](const Word& w) {
        if (w.tgt == b) reps.insert(pres_.normalizer(w));
      });
      out.value.assign(reps.begin(), reps.end());
      out.exhausted = longer_path_exists(a, b);
      return out;
    }
    std::set<Word> reps;
    bool flagged = false;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i].src != a || words_[i].tgt != b) continue;
      std::size_t root = uf_->find(i);
      reps.insert(words_[canon_[root]]);
      if (flag_overflow_.count(root)) flagged = true;
    }
    out.value.assign(reps.begin(), reps.end());
    out.exhausted = flagged || longer_path_exists(a, b);
    return out;
  }

  // True when a path a -> b of length exactly bound+1 exists, i.e. the
  // enumeration window may have cut a class off.
  bool longer_path_exists(const std::string& a, const std::string& b) const {
    std::map<std::string, bool> cur;
    cur[a] = true;
    for (std::size_t step = 0; step <= bound_; ++step) {
      std::map<std::string, bool> next;
      for (auto& [o, v] : cur)
        if (v)
          for (auto& e : pres_.gens.edges)
            if (e.src == o) next[e.tgt] = true;
      cur = std::move(next);
      if (cur.empty()) return false;
    }
    auto it = cur.find(b);
    return it != cur.end() && it->second;
  }

 private:
  void for_each_word(const std::string& src, const std::function<void(const Word&)>& f) const {
    // BFS over path lengths from src.
    std::vector<Word> layer{empty_word(src)};
    for (auto& w : layer) f(w);
    for (std::size_t len = 1; len <= bound_; ++len) {
      std::vector<Word> next;
      for (auto& w : layer)
        for (std::size_t e = 0; e < pres_.gens.edges.size(); ++e)
          if (pres_.gens.edges[e].src == w.tgt) {
            Word w2{w.src, pres_.gens.edges[e].tgt, w.gens};
            w2.gens.push_back(static_cast<std::uint32_t>(e));
            f(w2);
            next.push_back(std::move(w2));
          }
      layer = std::move(next);
      if (layer.empty()) break;
    }
  }

  void enumerate(std::size_t max_words) {
    for (auto& o : pres_.gens.objects)
      for_each_word(o, [&](const Word& w) {
        guard(words_.size() < max_words, "word universe exceeds limit");
        index_.emplace(w, words_.size());
        words_.push_back(w);
      });
  }

  std::string object_at(const Word& w, std::size_t pos) const {
    if (pos == 0) return w.src;
    return pres_.gens.edges[w.gens[pos - 1]].tgt;
  }

  void close() {
    uf_.emplace(words_.size());
    for (std::size_t i = 0; i < words_.size(); ++i) {
      for (auto& rel : pres_.relations) {
        apply_rewrites(i, rel.first, rel.second);
        apply_rewrites(i, rel.second, rel.first);
      }
    }
    canon_.assign(words_.size(), 0);
    std::vector<bool> seen(words_.size(), false);
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::size_t r = uf_->find(i);
      // words_ are generated in BFS order per source object, not globally
      // sorted, so take the explicit minimum.
      if (!seen[r] || words_[i] < words_[canon_[r]]) {
        canon_[r] = i;
        seen[r] = true;
      }
    }
    // overflow flags follow their class roots
    std::set<std::size_t> roots;
    for (auto id : overflow_words_) roots.insert(uf_->find(id));
    flag_overflow_ = std::move(roots);
  }

  void apply_rewrites(std::size_t wi, const Word& from, const Word& to) {
    const Word w = words_[wi];
    if (w.gens.size() < from.gens.size()) return;
    std::size_t rewritten_len = w.gens.size() - from.gens.size() + to.gens.size();
    // an empty pattern matches every cut point, including after the last letter
    std::size_t last_pos = w.gens.size() - from.gens.size();
    for (std::size_t pos = 0; pos <= last_pos; ++pos) {
      if (from.empty()) {
        if (object_at(w, pos) != from.src) continue;
      } else if (!std::equal(from.gens.begin(), from.gens.end(), w.gens.begin() + pos)) {
        continue;
      }
      if (rewritten_len > bound_) {
        overflow_ = true;
        overflow_words_.push_back(wi);
        continue;
      }
      Word w2{w.src, w.tgt, {}};
      w2.gens.insert(w2.gens.end(), w.gens.begin(), w.gens.begin() + pos);
      w2.gens.insert(w2.gens.end(), to.gens.begin(), to.gens.end());
      w2.gens.insert(w2.gens.end(), w.gens.begin() + pos + from.gens.size(), w.gens.end());
      uf_->unite(wi, index_.at(w2));
    }
  }

  PresentedCategory pres_;
  std::size_t bound_;
  std::vector<Word> words_;
  std::map<Word, std::size_t> index_;
  mutable std::optional<detail::UnionFind> uf_;  // find() compresses paths
  std::vector<std::size_t> canon_;
  bool overflow_ = false;
  std::vector<std::size_t> overflow_words_;
  std::set<std::size_t> flag_overflow_;
};

struct QuotientResult {
  PresentedCategory presentation;
  WordEquality classes;
};

// Add relations to a presentation and decide equality under the bound.  Any
// normalizer on `p` is dropped: it decided the old congruence, not the
// enlarged one.
inline QuotientResult quotient_category(const PresentedCategory& p,
                                        const std::vector<std::pair<Word, Word>>& extra,
                                        WordEqualityBound bound) {
  PresentedCategory q = p;
  q.normalizer = nullptr;
  for (auto& r : extra) q.relations.push_back(r);
  q.validate();
  WordEquality eq(q, bound);
  return QuotientResult{std::move(q), std::move(eq)};
}

inline Bounded<std::vector<Word>> hom_enumerate(const PresentedCategory& p,
                                                const std::string& a,
                                                const std::string& b,
                                                WordEqualityBound bound) {
  WordEquality eq(p, bound);
  return eq.hom_classes(a, b);
}

// ---------------------------------------------------------------------------
// Functors out of presented categories.

struct CatFunctor {
  std::map<std::string, std::string> obj_map;
  std::vector<Word> gen_map;  // image word per generator of the domain

  Word apply(const PresentedCategory& dom, const Word& w) const {
    dom.check_word(w);
    Word out = empty_word(obj_map.at(w.src));
    for (auto g : w.gens) out = concat(out, gen_map.at(g));
    return out;
  }
};

// Checks typing and that every relation of the domain maps to an equality in
// the codomain, using the supplied equality decision.
inline Report validate_functor(const PresentedCategory& dom, const CatFunctor& f,
                               const WordEquality& cod_eq) {
  const PresentedCategory& cod = cod_eq.presentation();
  Report rep;
  auto& typing = rep.add("functor-typing");
  for (auto& o : dom.gens.objects) {
    ++typing.instances;
    auto it = f.obj_map.find(o);
    if (it == f.obj_map.end() || !cod.gens.has_object(it->second))
      typing.fail_case("object " + o + " has no valid image");
  }
  if (f.gen_map.size() != dom.gens.edges.size()) {
    typing.fail_case("generator image count mismatch");
    return rep;
  }
  for (std::size_t g = 0; g < dom.gens.edges.size(); ++g) {
    ++typing.instances;
    auto& e = dom.gens.edges[g];
    const Word& img = f.gen_map[g];
    try {
      cod.check_word(img);
    } catch (const precondition_error& err) {
      typing.fail_case("image of " + e.label + ": " + err.what());
      continue;
    }
    if (img.src != f.obj_map.at(e.src) || img.tgt != f.obj_map.at(e.tgt))
      typing.fail_case("image of " + e.label + " has wrong endpoints");
  }
  if (typing.verdict == Verdict::fail) return rep;
  auto& rels = rep.add("functor-relations");
  for (auto& [l, r] : dom.relations) {
    ++rels.instances;
    try {
      if (!cod_eq.equal(f.apply(dom, l), f.apply(dom, r)))
        rels.fail_case("relation not preserved: " + word_str(dom.gens, l) + " = " +
                       word_str(dom.gens, r));
    } catch (const bound_exhausted_error&) {
      rels.exhausted = true;
      rels.verdict = rels.verdict == Verdict::fail ? Verdict::fail : Verdict::unknown;
    }
  }
  return rep;
}

// Presentation of a finite category: generators are the non-identity
// morphisms, relations tabulate binary composition.
inline PresentedCategory presentation_of(const FinCategory& c) {
  PresentedCategory p;
  p.gens.objects = c.objects;
  std::map<std::size_t, std::uint32_t> gen_of_mor;
  for (std::size_t m = 0; m < c.morphisms.size(); ++m)
    if (!c.is_identity(m)) {
      gen_of_mor[m] = static_cast<std::uint32_t>(p.gens.edges.size());
      p.gens.edges.push_back({c.morphisms[m].label, c.morphisms[m].src, c.morphisms[m].tgt});
    }
  auto word_of = [&](std::size_t m) {
    if (c.is_identity(m)) return empty_word(c.morphisms[m].src);
    return Word{c.morphisms[m].src, c.morphisms[m].tgt, {gen_of_mor.at(m)}};
  };
  for (std::size_t f = 0; f < c.morphisms.size(); ++f) {
    if (c.is_identity(f)) continue;
    for (std::size_t g = 0; g < c.morphisms.size(); ++g) {
      if (c.is_identity(g)) continue;
      if (c.morphisms[f].tgt != c.morphisms[g].src) continue;
      Word lhs = concat(word_of(f), word_of(g));
      Word rhs = word_of(c.then(f, g));
      p.relations.emplace_back(std::move(lhs), std::move(rhs));
    }
  }
  return p;
}

// Materialise a presented category as a finite one, or nothing if the bound
// cannot certify it.  With a normalizer, equality is total and we only need
// every hom to be fully enumerated (no longer paths).  Without one, we ask
// for stability — the classes at bound and bound+1 agree — compose by
// folding one generator at a time through the bound+1 closure, and run the
// category axioms over the finished table as a backstop.
inline std::optional<FinCategory> fin_category_of(const PresentedCategory& p,
                                                  WordEqualityBound bound) {
  WordEquality eq(p, bound);
  std::optional<WordEquality> deeper;
  if (!p.normalizer) deeper.emplace(p, WordEqualityBound{bound.max_word_length + 1});

  FinCategory c;
  c.objects = p.gens.objects;
  std::map<Word, std::size_t> mor_of_rep;
  std::vector<Word> reps;
  for (auto& a : c.objects)
    for (auto& b : c.objects) {
      auto homs = eq.hom_classes(a, b);
      if (p.normalizer) {
        if (homs.exhausted) return std::nullopt;
      } else {
        auto homs2 = deeper->hom_classes(a, b);
        if (homs.value != homs2.value) return std::nullopt;  // unstable
      }
      for (auto& w : homs.value) {
        mor_of_rep[w] = c.morphisms.size();
        reps.push_back(w);
        c.morphisms.push_back({word_str(p.gens, w), a, b});
        if (w.empty()) c.identities[a] = c.morphisms.size() - 1;
      }
    }
  if (c.identities.size() != c.objects.size()) return std::nullopt;

  const WordEquality& fold_eq = p.normalizer ? eq : *deeper;
  for (std::size_t f = 0; f < reps.size(); ++f)
    for (std::size_t g = 0; g < reps.size(); ++g) {
      if (reps[f].tgt != reps[g].src) continue;
      Word acc = reps[f];
      try {
        for (auto letter : reps[g].gens) {
          Word step = concat(acc, word_of_edges(p.gens, {letter}));
          acc = fold_eq.canonical(step);
        }
      } catch (const bound_exhausted_error&) {
        return std::nullopt;
      }
      auto it = mor_of_rep.find(acc);
      if (it == mor_of_rep.end()) return std::nullopt;
      c.comp[{f, g}] = it->second;
    }
  if (!validate_fin_category(c).ok()) return std::nullopt;
  return c;
}

// ---------------------------------------------------------------------------
// Pushouts of presented categories along a span B <-f- A -g-> C.

struct PushoutResult {
  PresentedCategory presentation;
  CatFunctor include_left, include_right;  // B -> P and C -> P
};

inline PushoutResult pushout_cat(const PresentedCategory& A, const CatFunctor& f,
                                 const PresentedCategory& B, const CatFunctor& g,
                                 const PresentedCategory& C) {
  A.validate();
  B.validate();
  C.validate();
  // Object pushout: quotient of B.objects + C.objects by f(a) ~ g(a).
  std::vector<std::string> pool;  // left objects then right objects
  for (auto& o : B.gens.objects) pool.push_back(o);
  std::size_t right_off = pool.size();
  for (auto& o : C.gens.objects) pool.push_back(o);
  detail::UnionFind uf(pool.size());
  auto left_idx = [&](const std::string& o) {
    for (std::size_t i = 0; i < right_off; ++i)
      if (pool[i] == o) return i;
    throw precondition_error("pushout: unknown left object " + o);
  };
  auto right_idx = [&](const std::string& o) {
    for (std::size_t i = right_off; i < pool.size(); ++i)
      if (pool[i] == o) return i;
    throw precondition_error("pushout: unknown right object " + o);
  };
  for (auto& a : A.gens.objects) uf.unite(left_idx(f.obj_map.at(a)), right_idx(g.obj_map.at(a)));

  // Name each class by its lexicographically least member; disambiguate a
  // right-hand name that collides with an unmerged left-hand one.
  std::map<std::size_t, std::string> class_name;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    std::size_t r = uf.find(i);
    auto it = class_name.find(r);
    if (it == class_name.end() || pool[i] < it->second) class_name[r] = pool[i];
  }
  std::set<std::string> used;
  for (auto& [r, n] : class_name) {
    std::string base = n;
    while (!used.insert(n).second) n += "'";
    (void)base;
  }
  auto left_obj = [&](const std::string& o) { return class_name.at(uf.find(left_idx(o))); };
  auto right_obj = [&](const std::string& o) { return class_name.at(uf.find(right_idx(o))); };

  PushoutResult out;
  PresentedCategory& P = out.presentation;
  for (auto& [r, n] : class_name) {
    (void)r;
    P.gens.objects.push_back(n);
  }
  std::sort(P.gens.objects.begin(), P.gens.objects.end());

  std::set<std::string> edge_names;
  auto fresh_edge = [&](std::string base) {
    std::string n = std::move(base);
    while (!edge_names.insert(n).second) n += "'";
    return n;
  };
  std::vector<std::uint32_t> left_gen(B.gens.edges.size()), right_gen(C.gens.edges.size());
  for (std::size_t e = 0; e < B.gens.edges.size(); ++e) {
    left_gen[e] = static_cast<std::uint32_t>(P.gens.edges.size());
    P.gens.edges.push_back({fresh_edge(B.gens.edges[e].label), left_obj(B.gens.edges[e].src),
                            left_obj(B.gens.edges[e].tgt)});
  }
  for (std::size_t e = 0; e < C.gens.edges.size(); ++e) {
    right_gen[e] = static_cast<std::uint32_t>(P.gens.edges.size());
    P.gens.edges.push_back({fresh_edge(C.gens.edges[e].label), right_obj(C.gens.edges[e].src),
                            right_obj(C.gens.edges[e].tgt)});
  }

  auto translate = [&](const Word& w, bool left) {
    Word t;
    t.src = left ? left_obj(w.src) : right_obj(w.src);
    t.tgt = left ? left_obj(w.tgt) : right_obj(w.tgt);
    for (auto ge : w.gens) t.gens.push_back(left ? left_gen[ge] : right_gen[ge]);
    return t;
  };
  for (auto& [l, r] : B.relations) P.relations.emplace_back(translate(l, true), translate(r, true));
  for (auto& [l, r] : C.relations)
    P.relations.emplace_back(translate(l, false), translate(r, false));
  for (std::size_t e = 0; e < A.gens.edges.size(); ++e) {
    Word lw = translate(f.gen_map.at(e), true);
    Word rw = translate(g.gen_map.at(e), false);
    P.relations.emplace_back(std::move(lw), std::move(rw));
  }
  P.validate();

  for (auto& o : B.gens.objects) out.include_left.obj_map[o] = left_obj(o);
  for (std::size_t e = 0; e < B.gens.edges.size(); ++e)
    out.include_left.gen_map.push_back(word_of_edges(P.gens, {left_gen[e]}));
  for (auto& o : C.gens.objects) out.include_right.obj_map[o] = right_obj(o);
  for (std::size_t e = 0; e < C.gens.edges.size(); ++e)
    out.include_right.gen_map.push_back(word_of_edges(P.gens, {right_gen[e]}));
  return out;
}

// ---------------------------------------------------------------------------
// Funny tensor product by normal forms: generators move one coordinate, and
// a word is normal when adjacent letters sit in different factors and no
// letter is an identity.  (Section-free statement: these are the standard
// free-product normal forms.)

struct FunnyTensor {
  PresentedCategory presentation;
  // generator index for (factor j, morphism m of factor j, objects z of the
  // others); key is (j, full object tuple with slot j = src obj, morphism).
  std::map<std::tuple<std::size_t, std::vector<std::string>, std::size_t>, std::uint32_t> gen_index;
  std::vector<FinCategory> factors;

  std::string object_name(const std::vector<std::string>& tup) const {
    std::string s = "(";
    for (std::size_t i = 0; i < tup.size(); ++i) {
      if (i) s += ",";
      s += tup[i];
    }
    return s + ")";
  }
};

inline FunnyTensor funny_tensor_presentation(const std::vector<FinCategory>& cs) {
  FunnyTensor out;
  out.factors = cs;
  PresentedCategory& P = out.presentation;
  std::vector<std::size_t> obj_radix;
  for (auto& c : cs) obj_radix.push_back(c.objects.size());

  std::vector<std::vector<std::string>> tuples;
  for_each_tuple(obj_radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t;
    for (std::size_t j = 0; j < cs.size(); ++j) t.push_back(cs[j].objects[idx[j]]);
    tuples.push_back(t);
    return true;
  });
  guard(tuples.size() <= 10000, "funny tensor: too many objects");
  for (auto& t : tuples) P.gens.objects.push_back(out.object_name(t));

  // factor/morphism/other-coordinates bookkeeping per generator
  struct GenInfo {
    std::size_t factor;
    std::size_t mor;
    std::vector<std::string> at;  // full tuple at the source
  };
  std::vector<GenInfo> info;
  for (auto& t : tuples) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      for (std::size_t m = 0; m < cs[j].morphisms.size(); ++m) {
        if (cs[j].is_identity(m)) continue;
        if (cs[j].morphisms[m].src != t[j]) continue;
        std::vector<std::string> tgt_tup = t;
        tgt_tup[j] = cs[j].morphisms[m].tgt;
        std::string lbl = "[" + std::to_string(j) + ":" + cs[j].morphisms[m].label + "@" +
                          out.object_name(t) + "]";
        out.gen_index[{j, t, m}] = static_cast<std::uint32_t>(P.gens.edges.size());
        P.gens.edges.push_back({lbl, out.object_name(t), out.object_name(tgt_tup)});
        info.push_back({j, m, t});
      }
    }
  }

  // relations: per factor, binary composites (and composites collapsing to
  // identities) with the other coordinates fixed
  for (auto& t : tuples) {
    for (std::size_t j = 0; j < cs.size(); ++j) {
      for (std::size_t m1 = 0; m1 < cs[j].morphisms.size(); ++m1) {
        if (cs[j].is_identity(m1) || cs[j].morphisms[m1].src != t[j]) continue;
        for (std::size_t m2 = 0; m2 < cs[j].morphisms.size(); ++m2) {
          if (cs[j].is_identity(m2)) continue;
          if (cs[j].morphisms[m1].tgt != cs[j].morphisms[m2].src) continue;
          std::vector<std::string> mid = t;
          mid[j] = cs[j].morphisms[m1].tgt;
          std::uint32_t g1 = out.gen_index.at({j, t, m1});
          std::uint32_t g2 = out.gen_index.at({j, mid, m2});
          Word lhs = word_of_edges(P.gens, {g1, g2});
          std::size_t mc = cs[j].then(m1, m2);
          Word rhs = cs[j].is_identity(mc)
                         ? empty_word(out.object_name(t))
                         : word_of_edges(P.gens, {out.gen_index.at({j, t, mc})});
          P.relations.emplace_back(std::move(lhs), std::move(rhs));
        }
      }
    }
  }

  // normal forms: merge adjacent same-factor letters, drop identities
  auto factors = cs;  // value copies for the closure
  auto gen_idx = out.gen_index;
  auto infos = info;
  P.normalizer = [factors, gen_idx, infos](const Word& w) {
    std::vector<std::uint32_t> stack;
    for (auto letter : w.gens) {
      if (!stack.empty()) {
        const GenInfo& top = infos[stack.back()];
        const GenInfo& cur = infos[letter];
        if (top.factor == cur.factor) {
          const FinCategory& F = factors[top.factor];
          std::size_t mc = F.then(top.mor, cur.mor);
          stack.pop_back();
          if (!F.is_identity(mc)) {
            stack.push_back(gen_idx.at({top.factor, top.at, mc}));
          }
          continue;
        }
      }
      stack.push_back(letter);
    }
    Word n{w.src, w.tgt, std::move(stack)};
    return n;
  };
  return out;
}

// ---------------------------------------------------------------------------
// Bounded isomorphism checks.

// Does some object bijection match hom-class counts on every pair?  Sound
// only as a size fingerprint; used where an explicit functor is not at hand.
inline bool isomorphic_on_bounded_homs(const WordEquality& P, const WordEquality& Q,
                                       bool* exhausted = nullptr) {
  auto po = P.presentation().gens.objects;
  auto qo = Q.presentation().gens.objects;
  if (po.size() != qo.size()) return false;
  guard(po.size() <= 6, "bijection search limited to 6 objects");
  std::sort(qo.begin(), qo.end());
  bool any_exhausted = false;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < po.size() && ok; ++i)
      for (std::size_t j = 0; j < po.size() && ok; ++j) {
        auto hp = P.hom_classes(po[i], po[j]);
        auto hq = Q.hom_classes(qo[i], qo[j]);
        any_exhausted = any_exhausted || hp.exhausted || hq.exhausted;
        if (hp.value.size() != hq.value.size()) ok = false;
      }
    if (ok) {
      if (exhausted) *exhausted = any_exhausted;
      return true;
    }
  } while (std::next_permutation(qo.begin(), qo.end()));
  if (exhausted) *exhausted = any_exhausted;
  return false;
}

// Is the functor F : P -> Q bijective on objects and on bounded hom classes?
inline bool functor_bounded_iso(const PresentedCategory& P, const CatFunctor& F,
                                const WordEquality& Q, WordEqualityBound bound,
                                bool* exhausted = nullptr) {
  WordEquality Peq(P, {bound.max_word_length});
  std::set<std::string> image;
  for (auto& o : P.gens.objects) image.insert(F.obj_map.at(o));
  if (image.size() != P.gens.objects.size() ||
      image.size() != Q.presentation().gens.objects.size())
    return false;
  bool exh = false;
  for (auto& a : P.gens.objects)
    for (auto& b : P.gens.objects) {
      auto hp = Peq.hom_classes(a, b);
      auto hq = Q.hom_classes(F.obj_map.at(a), F.obj_map.at(b));
      exh = exh || hp.exhausted || hq.exhausted;
      std::set<Word> mapped;
      for (auto& w : hp.value) {
        try {
          mapped.insert(Q.canonical(F.apply(P, w)));
        } catch (const bound_exhausted_error&) {
          exh = true;
        }
      }
      if (mapped.size() != hp.value.size()) {
        if (exhausted) *exhausted = exh;
        return false;  // not injective on classes
      }
      std::set<Word> target(hq.value.begin(), hq.value.end());
      if (mapped != target) {
        if (exhausted) *exhausted = exh;
        return false;
      }
    }
  if (exhausted) *exhausted = exh;
  return true;
}

}  // namespace freeprod
