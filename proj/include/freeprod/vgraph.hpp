#pragma once

// Graphs enriched in a base category B: a set of objects and a hom *object*
// of B for every ordered pair.  The base is a template parameter supplying
// finite products, coproducts and hom-set enumeration; FinSetBase (elem.hpp)
// and FinCatBase (base_fincat.hpp) are the shipped instances.
//
// Multimaps of enriched graphs carry an object multifunction together with
// one linear part per variable slot, pair of endpoints, and choice of
// objects in the remaining slots; no compatibility between different parts
// is required.  The free product glues the sources along exactly those
// parts, and precomposition with its unit multimap is a bijection onto
// multimaps — the factorisation is computed here, not just asserted.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "core.hpp"
#include "elem.hpp"

namespace freeprod {

template <typename B>
struct VGraph {
  std::vector<std::string> objects;
  std::map<std::pair<std::string, std::string>, typename B::Obj> hom;

  typename B::Obj at(const std::string& a, const std::string& b) const {
    auto it = hom.find({a, b});
    if (it == hom.end()) return B::initial();
    return it->second;
  }
  bool has_object(const std::string& o) const {
    return std::find(objects.begin(), objects.end(), o) != objects.end();
  }
  void validate() const {
    std::set<std::string> seen(objects.begin(), objects.end());
    if (seen.size() != objects.size()) throw precondition_error("duplicate graph object");
    for (auto& [k, v] : hom) {
      (void)v;
      if (!seen.count(k.first) || !seen.count(k.second))
        throw precondition_error("hom entry at unknown objects");
    }
  }
};

using SetVGraph = VGraph<FinSetBase>;

inline SetVGraph make_set_graph(
    std::vector<std::string> objects,
    const std::vector<std::tuple<std::string, std::string, std::string>>& edges) {
  SetVGraph g;
  g.objects = std::move(objects);
  std::map<std::pair<std::string, std::string>, std::vector<Elem>> acc;
  for (auto& [label, src, tgt] : edges) acc[{src, tgt}].push_back(Elem::atom(label));
  for (auto& [k, v] : acc) g.hom[k] = make_set(v);
  g.validate();
  return g;
}

// A morphism of enriched graphs: object map plus a hom morphism per pair.
template <typename B>
struct VMor {
  std::map<std::string, std::string> obj;
  std::map<std::pair<std::string, std::string>, typename B::Mor> homs;

  friend bool operator==(const VMor& f, const VMor& g) {
    return f.obj == g.obj && f.homs == g.homs;
  }
  friend bool operator<(const VMor& f, const VMor& g) {
    if (f.obj != g.obj) return f.obj < g.obj;
    return f.homs < g.homs;
  }
};

template <typename B>
VMor<B> identity_vmor(const VGraph<B>& A) {
  VMor<B> m;
  for (auto& o : A.objects) m.obj[o] = o;
  for (auto& a : A.objects)
    for (auto& b : A.objects) m.homs[{a, b}] = B::identity(A.at(a, b));
  return m;
}

template <typename B>
VMor<B> compose_vmor(const VMor<B>& g, const VMor<B>& f) {
  VMor<B> h;
  for (auto& [o, fo] : f.obj) h.obj[o] = g.obj.at(fo);
  for (auto& [k, fm] : f.homs)
    h.homs[k] = B::compose(g.homs.at({f.obj.at(k.first), f.obj.at(k.second)}), fm);
  return h;
}

template <typename B>
bool vmor_valid(const VGraph<B>& A, const VGraph<B>& Bg, const VMor<B>& f) {
  for (auto& o : A.objects)
    if (!f.obj.count(o) || !Bg.has_object(f.obj.at(o))) return false;
  for (auto& a : A.objects)
    for (auto& b : A.objects) {
      auto it = f.homs.find({a, b});
      if (it == f.homs.end()) return false;
      if (!(it->second.dom == A.at(a, b))) return false;
      if (!(it->second.cod == Bg.at(f.obj.at(a), f.obj.at(b)))) return false;
    }
  return true;
}

// All graph morphisms A -> Bg, lexicographically ordered, with a guard on
// the total count.
template <typename B>
std::vector<VMor<B>> enumerate_vmors(const VGraph<B>& A, const VGraph<B>& Bg,
                                     std::size_t cap = 10000) {
  std::vector<VMor<B>> out;
  if (A.objects.empty()) {
    out.push_back(VMor<B>{});
    return out;
  }
  std::vector<std::size_t> obj_radix(A.objects.size(), Bg.objects.size());
  for_each_tuple(obj_radix, [&](const std::vector<std::size_t>& oidx) {
    std::map<std::string, std::string> omap;
    for (std::size_t i = 0; i < A.objects.size(); ++i)
      omap[A.objects[i]] = Bg.objects[oidx[i]];
    // per-pair choices of hom morphisms
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::vector<typename B::Mor>> choices;
    bool possible = true;
    for (auto& a : A.objects) {
      for (auto& b : A.objects) {
        auto cand = B::hom_set(A.at(a, b), Bg.at(omap.at(a), omap.at(b)));
        if (cand.empty()) {
          possible = false;
          break;
        }
        pairs.push_back({a, b});
        choices.push_back(std::move(cand));
      }
      if (!possible) break;
    }
    if (!possible) return true;
    std::vector<std::size_t> radix;
    for (auto& c : choices) radix.push_back(c.size());
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      VMor<B> m;
      m.obj = omap;
      for (std::size_t i = 0; i < pairs.size(); ++i) m.homs[pairs[i]] = choices[i][idx[i]];
      guard(out.size() < cap, "graph morphism enumeration exceeds limit");
      out.push_back(std::move(m));
      return true;
    });
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Count graph morphisms A -> Bg without enumerating them: sum over object
// maps of the product, over ordered pairs (a,b), of |Bg(oa,ob)|^|A(a,b)|.
// Keeps large instances countable where enumerate_vmors would blow the cap.
inline unsigned long long count_set_vmors(const SetVGraph& A, const SetVGraph& Bg) {
  if (A.objects.empty()) return 1;
  checked_pow(Bg.objects.size(), A.objects.size(), 1000000000ull);  // iteration guard
  unsigned long long total = 0;
  std::vector<std::size_t> radix(A.objects.size(), Bg.objects.size());
  for_each_tuple(radix, [&](const std::vector<std::size_t>& oidx) {
    unsigned long long ways = 1;
    for (std::size_t i = 0; i < A.objects.size() && ways; ++i)
      for (std::size_t j = 0; j < A.objects.size() && ways; ++j) {
        unsigned long long base = Bg.at(Bg.objects[oidx[i]], Bg.objects[oidx[j]]).size();
        std::size_t exp = A.at(A.objects[i], A.objects[j]).size();
        for (std::size_t k = 0; k < exp; ++k) {
          guard(base == 0 || ways <= 1000000000000000000ull / (base ? base : 1),
                "morphism count overflow");
          ways *= base;
        }
      }
    total += ways;
    guard(total <= 1000000000000000000ull, "morphism count overflow");
    return true;
  });
  return total;
}

// ---------------------------------------------------------------------------
// Multimaps (A_1,...,A_n) -> T of enriched graphs.

// Linear-part key: variable slot, objects chosen in the other slots (entry
// at `var` is ""), and the endpoints in the variable slot.
using PartKey = std::tuple<std::size_t, std::vector<std::string>, std::string, std::string>;

template <typename B>
struct VMultimap {
  std::vector<VGraph<B>> sources;
  VGraph<B> target;
  std::map<std::vector<std::string>, std::string> obj;
  std::map<PartKey, typename B::Mor> parts;

  std::size_t arity() const { return sources.size(); }

  const std::string& apply_obj(const std::vector<std::string>& tup) const {
    auto it = obj.find(tup);
    if (it == obj.end()) throw precondition_error("multimap undefined on object tuple");
    return it->second;
  }
  const typename B::Mor& part(std::size_t var, std::vector<std::string> others,
                              const std::string& a, const std::string& b) const {
    others[var] = "";
    auto it = parts.find({var, others, a, b});
    if (it == parts.end()) throw precondition_error("multimap missing a linear part");
    return it->second;
  }
};

// The unique morphisms into the terminal and out of the initial hom object;
// bases supply specialisations.
template <typename B>
typename B::Mor make_terminal_mor(const typename B::Obj& dom);
template <typename B>
typename B::Mor initial_mor(const typename B::Obj& cod);

template <>
inline FinSetBase::Mor make_terminal_mor<FinSetBase>(const SetObj& dom) {
  return make_mor(dom, FinSetBase::terminal(), [](const Elem&) { return Elem::tuple({}); });
}

template <>
inline FinSetBase::Mor initial_mor<FinSetBase>(const SetObj& cod) {
  return SetMor{FinSetBase::initial(), cod, {}};
}

// every object tuple and every part present and well-typed
template <typename B>
bool multimap_valid(const VMultimap<B>& f) {
  std::vector<std::size_t> radix;
  for (auto& s : f.sources) radix.push_back(s.objects.size());
  bool ok = true;
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> tup;
    for (std::size_t j = 0; j < f.sources.size(); ++j)
      tup.push_back(f.sources[j].objects[idx[j]]);
    auto it = f.obj.find(tup);
    if (it == f.obj.end() || !f.target.has_object(it->second)) {
      ok = false;
      return false;
    }
    for (std::size_t var = 0; var < f.sources.size(); ++var) {
      for (auto& b_obj : f.sources[var].objects) {
        std::vector<std::string> key = tup;
        key[var] = "";
        auto pit = f.parts.find({var, key, tup[var], b_obj});
        if (pit == f.parts.end()) {
          ok = false;
          return false;
        }
        std::vector<std::string> tgt_tup = tup;
        tgt_tup[var] = b_obj;
        if (!(pit->second.dom == f.sources[var].at(tup[var], b_obj)) ||
            !(pit->second.cod == f.target.at(f.obj.at(tup), f.obj.at(tgt_tup)))) {
          ok = false;
          return false;
        }
      }
    }
    return true;
  });
  return ok;
}

// Multimap composition g(f_1,...,f_n): the object maps compose, and the
// linear part at a variable of f_i is the corresponding part of g at slot i
// (other slots evaluated) composed with that part of f_i.
template <typename B>
VMultimap<B> compose_multimap(const VMultimap<B>& g, const std::vector<VMultimap<B>>& fs) {
  if (fs.size() != g.arity()) throw precondition_error("composition arity mismatch");
  VMultimap<B> h;
  h.target = g.target;
  std::vector<std::size_t> block_of;  // flat slot -> which f
  std::vector<std::size_t> inner_of;  // flat slot -> slot within that f
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (!(fs[i].target.objects == g.sources[i].objects))
      throw precondition_error("composition: source/target mismatch");
    for (std::size_t j = 0; j < fs[i].arity(); ++j) {
      h.sources.push_back(fs[i].sources[j]);
      block_of.push_back(i);
      inner_of.push_back(j);
    }
  }
  std::vector<std::size_t> radix;
  for (auto& s : h.sources) radix.push_back(s.objects.size());
  auto assemble = [&](const std::vector<std::string>& w) {
    // evaluate each f_i's object map on its block of w
    std::vector<std::string> mid(fs.size());
    std::size_t pos = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      std::vector<std::string> blk(w.begin() + pos, w.begin() + pos + fs[i].arity());
      mid[i] = fs[i].apply_obj(blk);
      pos += fs[i].arity();
    }
    return mid;
  };
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> w(h.sources.size());
    for (std::size_t s = 0; s < h.sources.size(); ++s) w[s] = h.sources[s].objects[idx[s]];
    std::vector<std::string> mid = assemble(w);
    h.obj[w] = g.apply_obj(mid);
    for (std::size_t slot = 0; slot < h.sources.size(); ++slot) {
      std::size_t i = block_of[slot], j = inner_of[slot];
      for (auto& b_obj : h.sources[slot].objects) {
        std::vector<std::string> w2 = w;
        w2[slot] = b_obj;
        // inner part of f_i at (j, other block entries)
        std::size_t pos = 0;
        for (std::size_t k = 0; k < i; ++k) pos += fs[k].arity();
        std::vector<std::string> blk(w.begin() + pos, w.begin() + pos + fs[i].arity());
        auto inner = fs[i].part(j, blk, w[slot], b_obj);
        // part of g at slot i, others at mid
        std::vector<std::string> blk2(w2.begin() + pos, w2.begin() + pos + fs[i].arity());
        auto outer = g.part(i, mid, mid[i], fs[i].apply_obj(blk2));
        std::vector<std::string> key = w;
        key[slot] = "";
        h.parts[{slot, key, w[slot], b_obj}] = B::compose(outer, inner);
      }
    }
    return true;
  });
  return h;
}

template <typename B>
VMultimap<B> multimap_of_vmor(const VGraph<B>& A, const VGraph<B>& T, const VMor<B>& m) {
  VMultimap<B> f;
  f.sources = {A};
  f.target = T;
  for (auto& [o, img] : m.obj) f.obj[{o}] = img;
  for (auto& [k, hm] : m.homs) f.parts[{0, {""}, k.first, k.second}] = hm;
  return f;
}

// ---------------------------------------------------------------------------
// The hom graph [A,T]: objects are graph morphisms A -> T, and the hom from
// f to g is the product over objects a of T(fa, ga).  Points are kept in a
// deterministic order; object i is named "f<i>".

template <typename B>
struct GraphHom {
  VGraph<B> graph;
  std::vector<VMor<B>> points;

  std::size_t index_of(const VMor<B>& m) const {
    auto it = std::lower_bound(points.begin(), points.end(), m);
    if (it == points.end() || !(*it == m)) throw precondition_error("morphism not a hom point");
    return static_cast<std::size_t>(it - points.begin());
  }
  std::string name_of(const VMor<B>& m) const { return graph.objects[index_of(m)]; }
};

template <typename B>
GraphHom<B> graph_hom(const VGraph<B>& A, const VGraph<B>& T, std::size_t cap = 10000) {
  GraphHom<B> out;
  out.points = enumerate_vmors(A, T, cap);
  guard(out.points.size() <= cap, "hom graph exceeds object limit");
  for (std::size_t i = 0; i < out.points.size(); ++i)
    out.graph.objects.push_back("f" + std::to_string(i));
  for (std::size_t i = 0; i < out.points.size(); ++i)
    for (std::size_t j = 0; j < out.points.size(); ++j) {
      std::vector<typename B::Obj> factors;
      for (auto& a : A.objects)
        factors.push_back(T.at(out.points[i].obj.at(a), out.points[j].obj.at(a)));
      out.graph.hom[{out.graph.objects[i], out.graph.objects[j]}] =
          A.objects.empty() ? B::terminal() : B::product(factors);
    }
  return out;
}

// Right evaluation ([A,T], A) -> T: on objects (f, a) |-> f(a); the linear
// part in the hom slot is the projection at a, in the A slot it is f's own
// hom morphism.
template <typename B>
VMultimap<B> right_evaluation(const VGraph<B>& A, const VGraph<B>& T,
                              const GraphHom<B>& H) {
  VMultimap<B> rev;
  rev.sources = {H.graph, A};
  rev.target = T;
  for (std::size_t i = 0; i < H.points.size(); ++i)
    for (auto& a : A.objects) rev.obj[{H.graph.objects[i], a}] = H.points[i].obj.at(a);
  for (std::size_t i = 0; i < H.points.size(); ++i)
    for (std::size_t j = 0; j < H.points.size(); ++j)
      for (auto& a : A.objects) {
        std::vector<typename B::Obj> factors;
        std::size_t a_pos = 0;
        for (std::size_t k = 0; k < A.objects.size(); ++k) {
          factors.push_back(T.at(H.points[i].obj.at(A.objects[k]), H.points[j].obj.at(A.objects[k])));
          if (A.objects[k] == a) a_pos = k;
        }
        rev.parts[{0, {"", a}, H.graph.objects[i], H.graph.objects[j]}] =
            B::projection(factors, a_pos);
      }
  for (std::size_t i = 0; i < H.points.size(); ++i)
    for (auto& a : A.objects)
      for (auto& b : A.objects)
        rev.parts[{1, {H.graph.objects[i], ""}, a, b}] = H.points[i].homs.at({a, b});
  return rev;
}

// Curry F : (Z_1,...,Z_k, A) -> T into G : (Z_1,...,Z_k) -> [A,T] with
// F = rev o (G, 1_A).
template <typename B>
VMultimap<B> closedness_factor(const VMultimap<B>& F, const GraphHom<B>& H) {
  if (F.arity() == 0) throw precondition_error("closedness_factor needs the last slot");
  std::size_t k = F.arity() - 1;
  const VGraph<B>& A = F.sources[k];
  VMultimap<B> G;
  G.sources.assign(F.sources.begin(), F.sources.end() - 1);
  G.target = H.graph;
  std::vector<std::size_t> radix;
  for (auto& s : G.sources) radix.push_back(s.objects.size());
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> z(G.sources.size());
    for (std::size_t s = 0; s < G.sources.size(); ++s) z[s] = G.sources[s].objects[idx[s]];
    // the point F(z, -) : A -> T
    VMor<B> pt;
    std::vector<std::string> full = z;
    full.push_back("");
    for (auto& a : A.objects) {
      std::vector<std::string> tup = z;
      tup.push_back(a);
      pt.obj[a] = F.apply_obj(tup);
    }
    for (auto& a : A.objects)
      for (auto& b : A.objects) pt.homs[{a, b}] = F.parts.at({k, full, a, b});
    G.obj[z] = H.name_of(pt);
    return true;
  });
  // linear parts: tuple the parts of F over the objects of A
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> z(G.sources.size());
    for (std::size_t s = 0; s < G.sources.size(); ++s) z[s] = G.sources[s].objects[idx[s]];
    for (std::size_t var = 0; var < G.sources.size(); ++var) {
      for (auto& b_obj : G.sources[var].objects) {
        std::vector<std::string> z2 = z;
        z2[var] = b_obj;
        std::vector<typename B::Mor> comps;
        for (auto& a : A.objects) {
          std::vector<std::string> others = z;
          others.push_back(a);
          others[var] = "";
          comps.push_back(F.parts.at({var, others, z[var], b_obj}));
        }
        std::vector<std::string> key = z;
        key[var] = "";
        if (comps.empty()) {
          // A has no objects: hom object of [A,T] is terminal
          G.parts[{var, key, z[var], b_obj}] = make_terminal_mor<B>(G.sources[var].at(z[var], b_obj));
        } else {
          G.parts[{var, key, z[var], b_obj}] = B::tupling(comps);
        }
      }
    }
    return true;
  });
  return G;
}

// ---------------------------------------------------------------------------
// Free product of enriched graphs.  Objects are tuples; a hom is the
// coproduct of the factor endo-homs on the diagonal, the single moving
// factor's hom when exactly one coordinate differs, and initial otherwise.

template <typename B>
struct FreeProduct {
  VGraph<B> graph;
  VMultimap<B> unit;                       // the universal multimap
  std::vector<VGraph<B>> factors;
  std::map<std::vector<std::string>, std::string> name;  // tuple -> object name

  std::string object_of(const std::vector<std::string>& tup) const { return name.at(tup); }
};

inline std::string tuple_name(const std::vector<std::string>& tup) {
  std::string s = "(";
  for (std::size_t i = 0; i < tup.size(); ++i) {
    if (i) s += ",";
    s += tup[i];
  }
  return s + ")";
}

template <typename B>
FreeProduct<B> free_product_graphs(const std::vector<VGraph<B>>& As,
                                   std::size_t cap = 10000) {
  FreeProduct<B> out;
  out.factors = As;
  std::vector<std::size_t> radix;
  for (auto& A : As) radix.push_back(A.objects.size());
  std::vector<std::vector<std::string>> tuples;
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t(As.size());
    for (std::size_t j = 0; j < As.size(); ++j) t[j] = As[j].objects[idx[j]];
    tuples.push_back(t);
    return true;
  });
  guard(tuples.size() <= cap, "free product exceeds object limit");
  for (auto& t : tuples) {
    out.name[t] = tuple_name(t);
    out.graph.objects.push_back(tuple_name(t));
  }
  for (auto& a : tuples)
    for (auto& b : tuples) {
      std::vector<std::size_t> moved;
      for (std::size_t j = 0; j < As.size(); ++j)
        if (a[j] != b[j]) moved.push_back(j);
      if (moved.size() > 1) continue;  // initial, left implicit
      if (moved.size() == 1) {
        std::size_t j = moved[0];
        out.graph.hom[{tuple_name(a), tuple_name(b)}] = As[j].at(a[j], b[j]);
      } else {
        std::vector<typename B::Obj> summands;
        for (std::size_t j = 0; j < As.size(); ++j) summands.push_back(As[j].at(a[j], a[j]));
        out.graph.hom[{tuple_name(a), tuple_name(b)}] =
            As.empty() ? B::initial() : B::coproduct(summands);
      }
    }
  // the universal multimap
  out.unit.sources = As;
  out.unit.target = out.graph;
  for (auto& t : tuples) out.unit.obj[t] = tuple_name(t);
  for (auto& t : tuples)
    for (std::size_t var = 0; var < As.size(); ++var)
      for (auto& b_obj : As[var].objects) {
        std::vector<std::string> key = t;
        key[var] = "";
        std::vector<std::string> t2 = t;
        t2[var] = b_obj;
        if (t[var] == b_obj) {
          std::vector<typename B::Obj> summands;
          for (std::size_t j = 0; j < As.size(); ++j) summands.push_back(As[j].at(t[j], t[j]));
          out.unit.parts[{var, key, t[var], b_obj}] = B::injection(summands, var);
        } else {
          out.unit.parts[{var, key, t[var], b_obj}] = B::identity(As[var].at(t[var], b_obj));
        }
      }
  return out;
}

// The same homs, re-expressed: a coproduct over slots j of the j-th hom
// times the *discrete* homs of the other factors (terminal on the diagonal,
// initial off it).  Distributivity of the base makes this agree with the
// case-split formula; the FinSet comparison is by cardinality plus the
// order-preserving bijection.
template <typename B>
typename B::Obj free_product_hom_distributed(const std::vector<VGraph<B>>& As,
                                             const std::vector<std::string>& a,
                                             const std::vector<std::string>& b) {
  std::vector<typename B::Obj> summands;
  for (std::size_t j = 0; j < As.size(); ++j) {
    std::vector<typename B::Obj> factors;
    for (std::size_t i = 0; i < As.size(); ++i) {
      if (i == j)
        factors.push_back(As[i].at(a[i], b[i]));
      else
        factors.push_back(a[i] == b[i] ? B::terminal() : B::initial());
    }
    summands.push_back(B::product(factors));
  }
  return summands.empty() ? B::initial() : B::coproduct(summands);
}

// Isomorphism of Set-valued graphs: some object bijection matches all hom
// cardinalities (enough, since finite sets of equal size are isomorphic).
inline bool set_graphs_isomorphic(const SetVGraph& A, const SetVGraph& B) {
  if (A.objects.size() != B.objects.size()) return false;
  std::vector<std::size_t> perm(B.objects.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  guard(A.objects.size() <= 8, "isomorphism search limited to 8 objects");
  do {
    bool ok = true;
    for (std::size_t i = 0; i < A.objects.size() && ok; ++i)
      for (std::size_t j = 0; j < A.objects.size() && ok; ++j)
        if (A.at(A.objects[i], A.objects[j]).size() !=
            B.at(B.objects[perm[i]], B.objects[perm[j]]).size())
          ok = false;
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Factor a multimap F : (A_i) -> C through the free product: the unique
// graph morphism G with G o unit = F.
template <typename B>
VMor<B> factor_through_free_product(const FreeProduct<B>& fp, const VMultimap<B>& F) {
  VMor<B> G;
  for (auto& [tup, nm] : fp.name) G.obj[nm] = F.apply_obj(tup);
  for (auto& [tup_a, nm_a] : fp.name)
    for (auto& [tup_b, nm_b] : fp.name) {
      std::vector<std::size_t> moved;
      for (std::size_t j = 0; j < tup_a.size(); ++j)
        if (tup_a[j] != tup_b[j]) moved.push_back(j);
      if (moved.size() > 1) {
        // initial source: the unique morphism out of it
        G.homs[{nm_a, nm_b}] = initial_mor<B>(F.target.at(G.obj.at(nm_a), G.obj.at(nm_b)));
      } else if (moved.size() == 1) {
        std::size_t j = moved[0];
        std::vector<std::string> key = tup_a;
        key[j] = "";
        G.homs[{nm_a, nm_b}] = F.parts.at({j, key, tup_a[j], tup_b[j]});
      } else {
        std::vector<typename B::Mor> comps;
        for (std::size_t j = 0; j < tup_a.size(); ++j) {
          std::vector<std::string> key = tup_a;
          key[j] = "";
          comps.push_back(F.parts.at({j, key, tup_a[j], tup_a[j]}));
        }
        if (comps.empty()) {
          G.homs[{nm_a, nm_b}] = initial_mor<B>(F.target.at(G.obj.at(nm_a), G.obj.at(nm_b)));
        } else {
          G.homs[{nm_a, nm_b}] = B::cotupling(comps);
        }
      }
    }
  return G;
}

// ---------------------------------------------------------------------------
// The cocone reformulation: a multimap (A_i) -> T is the same data as maps
// f_j out of the product-with-one-live-slot graphs, agreeing on objects.

// Product of the object sets of all factors, with factor j's homs kept.
template <typename B>
VGraph<B> one_slot_product(const std::vector<VGraph<B>>& As, std::size_t live) {
  VGraph<B> g;
  std::vector<std::size_t> radix;
  for (auto& A : As) radix.push_back(A.objects.size());
  std::vector<std::vector<std::string>> tuples;
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t(As.size());
    for (std::size_t j = 0; j < As.size(); ++j) t[j] = As[j].objects[idx[j]];
    tuples.push_back(t);
    return true;
  });
  for (auto& t : tuples) g.objects.push_back(tuple_name(t));
  for (auto& a : tuples)
    for (auto& b : tuples) {
      bool same_frozen = true;
      for (std::size_t j = 0; j < As.size(); ++j)
        if (j != live && a[j] != b[j]) same_frozen = false;
      if (!same_frozen) continue;
      g.hom[{tuple_name(a), tuple_name(b)}] = As[live].at(a[live], b[live]);
    }
  return g;
}

struct CoconeLeg {
  std::size_t live;
};

// Split a multimap into its per-slot graph morphisms.
template <typename B>
std::vector<VMor<B>> cocone_of_multimap(const VMultimap<B>& F) {
  std::vector<VMor<B>> legs;
  std::vector<std::size_t> radix;
  for (auto& s : F.sources) radix.push_back(s.objects.size());
  for (std::size_t live = 0; live < F.arity(); ++live) {
    VMor<B> leg;
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      std::vector<std::string> t(F.arity());
      for (std::size_t j = 0; j < F.arity(); ++j) t[j] = F.sources[j].objects[idx[j]];
      leg.obj[tuple_name(t)] = F.apply_obj(t);
      return true;
    });
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      std::vector<std::string> t(F.arity());
      for (std::size_t j = 0; j < F.arity(); ++j) t[j] = F.sources[j].objects[idx[j]];
      for (auto& b_obj : F.sources[live].objects) {
        std::vector<std::string> t2 = t;
        t2[live] = b_obj;
        std::vector<std::string> key = t;
        key[live] = "";
        leg.homs[{tuple_name(t), tuple_name(t2)}] = F.parts.at({live, key, t[live], b_obj});
      }
      return true;
    });
    // frozen-coordinate mismatches have initial homs; record their components
    // so the leg is a complete morphism out of the one-slot product
    for (auto& [na, oa] : leg.obj)
      for (auto& [nb, ob] : leg.obj)
        if (!leg.homs.count({na, nb}))
          leg.homs[{na, nb}] = initial_mor<B>(F.target.at(oa, ob));
    legs.push_back(std::move(leg));
  }
  return legs;
}

// Reassemble a multimap from cocone legs; the legs must agree on objects.
template <typename B>
VMultimap<B> multimap_from_cocone(const std::vector<VGraph<B>>& As, const VGraph<B>& T,
                                  const std::vector<VMor<B>>& legs) {
  if (legs.size() != As.size()) throw precondition_error("cocone needs one leg per factor");
  if (legs.empty()) throw precondition_error("cocone reformulation needs arity >= 1");
  for (std::size_t j = 0; j < legs.size(); ++j)
    for (std::size_t k = j + 1; k < legs.size(); ++k)
      if (!(legs[j].obj == legs[k].obj))
        throw precondition_error("cocone legs (" + std::to_string(j + 1) + "," +
                                 std::to_string(k + 1) + ") disagree on objects");
  VMultimap<B> F;
  F.sources = As;
  F.target = T;
  std::vector<std::size_t> radix;
  for (auto& A : As) radix.push_back(A.objects.size());
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t(As.size());
    for (std::size_t j = 0; j < As.size(); ++j) t[j] = As[j].objects[idx[j]];
    F.obj[t] = legs[0].obj.at(tuple_name(t));
    for (std::size_t live = 0; live < As.size(); ++live)
      for (auto& b_obj : As[live].objects) {
        std::vector<std::string> t2 = t;
        t2[live] = b_obj;
        std::vector<std::string> key = t;
        key[live] = "";
        F.parts[{live, key, t[live], b_obj}] = legs[live].homs.at({tuple_name(t), tuple_name(t2)});
      }
    return true;
  });
  return F;
}

}  // namespace freeprod
