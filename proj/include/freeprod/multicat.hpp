#pragma once

// Finite symmetric multicategories with materialised hom sets.  An instance
// supplies hom enumeration, units, composition and the action of adjacent
// transpositions; general permutation actions are composed from the adjacent
// ones.  On top of the interface: axiom validation, universality and
// closedness predicates, the closed structure induced on linear maps, the
// multicategory of a monoidal category, and the separately-functorial
// multimap construction over a category of sets.

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "base_fincat.hpp"
#include "core.hpp"
#include "elem.hpp"
#include "fincat.hpp"
#include "vgraph.hpp"

namespace freeprod {

// A multimap value together with its typing context.  Values are opaque to
// the framework; only the instance functions interpret them.
struct TypedMultimap {
  std::vector<std::string> src;
  std::string tgt;
  Elem val;

  friend bool operator==(const TypedMultimap& a, const TypedMultimap& b) {
    return a.src == b.src && a.tgt == b.tgt && a.val == b.val;
  }
  friend bool operator<(const TypedMultimap& a, const TypedMultimap& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.tgt != b.tgt) return a.tgt < b.tgt;
    return a.val < b.val;
  }
};

// ---------------------------------------------------------------------------
// The multicategory interface.  Hom sets are materialised on demand, sorted,
// and cached; swap_fn gives the action of the transposition (k k+1).

struct Multicat {
  std::string name;
  std::vector<std::string> objects;
  std::size_t max_hom = 100000;

  std::function<std::vector<Elem>(const std::vector<std::string>&, const std::string&)> hom_fn;
  std::function<Elem(const std::string&)> unit_fn;
  std::function<Elem(const TypedMultimap&, const std::vector<TypedMultimap>&)> compose_fn;
  std::function<Elem(const TypedMultimap&, std::size_t)> swap_fn;

  mutable std::map<std::pair<std::vector<std::string>, std::string>, std::vector<Elem>> cache;

  const std::vector<Elem>& hom(const std::vector<std::string>& src, const std::string& tgt) const {
    auto key = std::make_pair(src, tgt);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    std::vector<Elem> out = hom_fn(src, tgt);
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
      throw precondition_error("hom set of " + name + " contains duplicates");
    guard(out.size() <= max_hom, "materialised hom set exceeds limit");
    return cache.emplace(std::move(key), std::move(out)).first->second;
  }

  TypedMultimap unit(const std::string& x) const { return {{x}, x, unit_fn(x)}; }

  TypedMultimap compose(const TypedMultimap& g, const std::vector<TypedMultimap>& fs) const {
    if (fs.size() != g.src.size())
      throw precondition_error("composite needs one inner multimap per input");
    std::vector<std::string> src;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      if (fs[i].tgt != g.src[i])
        throw precondition_error("inner multimap " + std::to_string(i + 1) +
                                 " lands in " + fs[i].tgt + ", expected " + g.src[i]);
      src.insert(src.end(), fs[i].src.begin(), fs[i].src.end());
    }
    return {std::move(src), g.tgt, compose_fn(g, fs)};
  }

  // g with f substituted into input k and identities elsewhere.
  TypedMultimap placed(const TypedMultimap& g, std::size_t k, const TypedMultimap& f) const {
    std::vector<TypedMultimap> fs;
    for (std::size_t i = 0; i < g.src.size(); ++i)
      fs.push_back(i == k ? f : unit(g.src[i]));
    return compose(g, fs);
  }

  // f acted by sigma: source i of the result is source sigma(i) of f.  The
  // permutation is written as a product of adjacent transpositions and the
  // instance swaps are applied one at a time.
  TypedMultimap act(const TypedMultimap& f, const Perm& sigma) const {
    if (sigma.size() != f.src.size())
      throw precondition_error("permutation arity mismatch");
    Perm v = sigma;
    std::vector<std::size_t> swaps;
    bool moved = true;
    while (moved) {
      moved = false;
      for (std::size_t k = 0; k + 1 < v.size(); ++k)
        if (v[k] > v[k + 1]) {
          std::swap(v[k], v[k + 1]);
          swaps.push_back(k);
          moved = true;
        }
    }
    TypedMultimap cur = f;
    for (auto it = swaps.rbegin(); it != swaps.rend(); ++it) {
      Elem val = swap_fn(cur, *it);
      std::swap(cur.src[*it], cur.src[*it + 1]);
      cur.val = std::move(val);
    }
    return cur;
  }
};

// ---------------------------------------------------------------------------
// Axiom validation.  Every check walks a deterministic enumeration and stops
// at the instance budget with an exhausted flag; verdicts are never guessed.

struct MulticatLimits {
  std::size_t max_arity = 2;
  std::size_t max_instances = 20000;
};

inline std::vector<std::vector<std::string>> object_sequences(
    const std::vector<std::string>& objs, std::size_t max_len) {
  std::vector<std::vector<std::string>> out;
  out.push_back({});
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> radix(len, objs.size());
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      std::vector<std::string> seq;
      seq.reserve(len);
      for (auto i : idx) seq.push_back(objs[i]);
      out.push_back(std::move(seq));
      return true;
    });
  }
  return out;
}

inline std::string seq_str(const std::vector<std::string>& seq) {
  std::string s = "(";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) s += ",";
    s += seq[i];
  }
  return s + ")";
}

inline std::string clip(const std::string& s, std::size_t n = 60) {
  return s.size() <= n ? s : s.substr(0, n) + "...";
}

inline Report validate_symmetric_multicat(const Multicat& X, MulticatLimits lim = {}) {
  Report rep;
  auto seqs = object_sequences(X.objects, lim.max_arity);

  // Multimaps grouped by typing, materialised once up front; sequences whose
  // homs blow the size guard are skipped and flagged.
  std::vector<TypedMultimap> all;
  bool truncated = false;
  for (auto& s : seqs)
    for (auto& t : X.objects) {
      try {
        for (auto& v : X.hom(s, t)) all.push_back({s, t, v});
      } catch (const size_guard_error&) {
        truncated = true;
      }
    }

  auto& act_unit = rep.add("action-unit");
  act_unit.exhausted = truncated;
  for (auto& f : all) {
    if (act_unit.instances >= lim.max_instances) {
      act_unit.exhausted = true;
      break;
    }
    ++act_unit.instances;
    if (!(X.act(f, perm_identity(f.src.size())) == f))
      act_unit.fail_case("identity action moved " + clip(f.val.str()) + " : " +
                         seq_str(f.src) + "->" + f.tgt);
  }

  auto& act_comp = rep.add("action-composition");
  act_comp.exhausted = truncated;
  for (auto& f : all) {
    if (f.src.size() < 2 || act_comp.verdict == Verdict::fail) continue;
    auto perms = all_perms(f.src.size());
    bool stop = false;
    for (auto& sg : perms) {
      for (auto& tu : perms) {
        if (act_comp.instances >= lim.max_instances) {
          act_comp.exhausted = true;
          stop = true;
          break;
        }
        ++act_comp.instances;
        if (!(X.act(X.act(f, sg), tu) == X.act(f, perm_compose(sg, tu))))
          act_comp.fail_case("iterated action disagrees on " + clip(f.val.str()) + " : " +
                             seq_str(f.src) + "->" + f.tgt);
      }
      if (stop) break;
    }
    if (stop) break;
  }

  auto& unit_left = rep.add("unit-left");
  unit_left.exhausted = truncated;
  for (auto& f : all) {
    if (unit_left.instances >= lim.max_instances) {
      unit_left.exhausted = true;
      break;
    }
    ++unit_left.instances;
    if (!(X.compose(X.unit(f.tgt), {f}) == f))
      unit_left.fail_case("unit after " + clip(f.val.str()) + " : " + seq_str(f.src) +
                          "->" + f.tgt);
  }

  auto& unit_right = rep.add("unit-right");
  unit_right.exhausted = truncated;
  for (auto& f : all) {
    if (unit_right.instances >= lim.max_instances) {
      unit_right.exhausted = true;
      break;
    }
    ++unit_right.instances;
    std::vector<TypedMultimap> us;
    for (auto& x : f.src) us.push_back(X.unit(x));
    if (!(X.compose(f, us) == f))
      unit_right.fail_case("units before " + clip(f.val.str()) + " : " + seq_str(f.src) +
                           "->" + f.tgt);
  }

  // Inner multimaps for the nested checks, grouped by target object.
  std::map<std::string, std::vector<TypedMultimap>> into;
  for (auto& f : all) into[f.tgt].push_back(f);

  auto& assoc = rep.add("composition-associativity");
  assoc.exhausted = truncated;
  {
    bool stop = false;
    for (auto& h : all) {
      if (stop || h.src.empty()) continue;
      // choose inner g_i by odometer over multimaps into each source object
      std::vector<std::size_t> radix;
      bool any_empty = false;
      for (auto& b : h.src) {
        radix.push_back(into[b].size());
        if (into[b].empty()) any_empty = true;
      }
      if (any_empty) continue;
      for_each_tuple(radix, [&](const std::vector<std::size_t>& gi) {
        std::vector<TypedMultimap> gs;
        for (std::size_t i = 0; i < gi.size(); ++i) gs.push_back(into[h.src[i]][gi[i]]);
        // innermost layer: one multimap into each source of each g_i
        std::vector<std::size_t> radix2;
        bool empty2 = false;
        std::vector<std::pair<std::size_t, std::size_t>> where;
        for (std::size_t i = 0; i < gs.size(); ++i)
          for (std::size_t j = 0; j < gs[i].src.size(); ++j) {
            radix2.push_back(into[gs[i].src[j]].size());
            if (into[gs[i].src[j]].empty()) empty2 = true;
            where.push_back({i, j});
          }
        if (empty2) return true;
        for_each_tuple(radix2, [&](const std::vector<std::size_t>& fi) {
          if (assoc.instances >= lim.max_instances) {
            assoc.exhausted = true;
            stop = true;
            return false;
          }
          ++assoc.instances;
          std::vector<std::vector<TypedMultimap>> fss(gs.size());
          for (std::size_t k = 0; k < where.size(); ++k)
            fss[where[k].first].push_back(into[gs[where[k].first].src[where[k].second]][fi[k]]);
          std::vector<TypedMultimap> flat, composed;
          for (std::size_t i = 0; i < gs.size(); ++i) {
            composed.push_back(X.compose(gs[i], fss[i]));
            for (auto& f : fss[i]) flat.push_back(f);
          }
          if (!(X.compose(X.compose(h, gs), flat) == X.compose(h, composed)))
            assoc.fail_case("nested composites disagree at " + clip(h.val.str()) + " : " +
                            seq_str(h.src) + "->" + h.tgt);
          return true;
        });
        return !stop;
      });
    }
  }

  auto& equiv = rep.add("equivariance");
  equiv.exhausted = truncated;
  {
    bool stop = false;
    for (auto& g : all) {
      if (stop || g.src.empty()) continue;
      std::vector<std::size_t> radix;
      bool any_empty = false;
      for (auto& b : g.src) {
        radix.push_back(into[b].size());
        if (into[b].empty()) any_empty = true;
      }
      if (any_empty) continue;
      auto outer_perms = all_perms(g.src.size());
      for_each_tuple(radix, [&](const std::vector<std::size_t>& fi) {
        std::vector<TypedMultimap> fs;
        for (std::size_t i = 0; i < fi.size(); ++i) fs.push_back(into[g.src[i]][fi[i]]);
        for (auto& sg : outer_perms) {
          // inner permutations: one per factor, enumerated jointly
          std::vector<std::vector<Perm>> inner;
          std::vector<std::size_t> pradix;
          for (auto& f : fs) {
            inner.push_back(all_perms(f.src.size()));
            pradix.push_back(inner.back().size());
          }
          for_each_tuple(pradix, [&](const std::vector<std::size_t>& pi) {
            if (equiv.instances >= lim.max_instances) {
              equiv.exhausted = true;
              stop = true;
              return false;
            }
            ++equiv.instances;
            std::vector<Perm> taus;
            for (std::size_t i = 0; i < pi.size(); ++i) taus.push_back(inner[i][pi[i]]);
            // block permutation: new block i is old block sigma(i), permuted
            // internally by tau_{sigma(i)}
            std::vector<std::size_t> offset(fs.size() + 1, 0);
            for (std::size_t i = 0; i < fs.size(); ++i)
              offset[i + 1] = offset[i] + fs[i].src.size();
            Perm rho;
            for (std::size_t i = 0; i < fs.size(); ++i)
              for (std::size_t j = 0; j < fs[sg[i]].src.size(); ++j)
                rho.push_back(offset[sg[i]] + taus[sg[i]][j]);
            std::vector<TypedMultimap> permuted;
            for (std::size_t i = 0; i < fs.size(); ++i)
              permuted.push_back(X.act(fs[sg[i]], taus[sg[i]]));
            TypedMultimap lhs = X.act(X.compose(g, fs), rho);
            TypedMultimap rhs = X.compose(X.act(g, sg), permuted);
            if (!(lhs == rhs))
              equiv.fail_case("equivariance fails at " + clip(g.val.str()) + " : " +
                              seq_str(g.src) + "->" + g.tgt);
            return true;
          });
          if (stop) break;
        }
        return !stop;
      });
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Universality: composition with f identifies multimaps out of f's source
// with linear maps out of its target.  Bijections are checked exhaustively;
// a hom set beyond the guard limit yields "unknown", never a guess.

inline Verdict bijection_by_composition(
    const Multicat& X, const std::vector<std::string>& dom_src, const std::string& dom_tgt,
    const std::vector<std::string>& cod_src, const std::string& cod_tgt,
    const std::function<TypedMultimap(const TypedMultimap&)>& via) {
  const std::vector<Elem>* A;
  const std::vector<Elem>* B;
  try {
    A = &X.hom(dom_src, dom_tgt);
    B = &X.hom(cod_src, cod_tgt);
  } catch (const size_guard_error&) {
    return Verdict::unknown;
  }
  if (A->size() != B->size()) return Verdict::fail;
  std::set<Elem> image;
  for (auto& g : *A) {
    TypedMultimap composed = via({dom_src, dom_tgt, g});
    if (!(composed.src == cod_src) || composed.tgt != cod_tgt) return Verdict::fail;
    image.insert(composed.val);
  }
  if (image.size() != A->size()) return Verdict::fail;
  std::set<Elem> want(B->begin(), B->end());
  return image == want ? Verdict::pass : Verdict::fail;
}

inline Verdict is_universal(const Multicat& X, const TypedMultimap& f) {
  bool unknown = false;
  for (auto& z : X.objects) {
    Verdict v = bijection_by_composition(
        X, {f.tgt}, z, f.src, z,
        [&](const TypedMultimap& g) { return X.compose(g, {f}); });
    if (v == Verdict::fail) return Verdict::fail;
    if (v == Verdict::unknown) unknown = true;
  }
  return unknown ? Verdict::unknown : Verdict::pass;
}

// Placed composition with f is a bijection for every context of length at
// most max_context around f's target.  The length bound is the contract.
inline Verdict is_strongly_universal(const Multicat& X, const TypedMultimap& f,
                                     std::size_t max_context = 2) {
  bool unknown = false;
  for (std::size_t len = 1; len <= max_context; ++len) {
    for (std::size_t k = 0; k < len; ++k) {
      std::vector<std::size_t> radix(len - 1, X.objects.size());
      bool failed = false;
      for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
        std::vector<std::string> ctx;
        for (std::size_t i = 0, j = 0; i < len; ++i)
          ctx.push_back(i == k ? f.tgt : X.objects[idx[j++]]);
        std::vector<std::string> substituted;
        for (std::size_t i = 0; i < len; ++i) {
          if (i == k)
            substituted.insert(substituted.end(), f.src.begin(), f.src.end());
          else
            substituted.push_back(ctx[i]);
        }
        for (auto& z : X.objects) {
          Verdict v = bijection_by_composition(
              X, ctx, z, substituted, z,
              [&](const TypedMultimap& g) { return X.placed(g, k, f); });
          if (v == Verdict::fail) {
            failed = true;
            return false;
          }
          if (v == Verdict::unknown) unknown = true;
        }
        return true;
      });
      if (failed) return Verdict::fail;
    }
  }
  return unknown ? Verdict::unknown : Verdict::pass;
}

// ---------------------------------------------------------------------------
// Closedness: a hom object [x,y] and right evaluation ([x,y],x) -> y per
// pair, such that pasting the evaluation identifies multimaps into [x,y]
// with multimaps carrying an extra x input.

struct ClosedData {
  std::map<std::pair<std::string, std::string>, std::string> hom;
  std::map<std::pair<std::string, std::string>, Elem> rev;

  const std::string& hom_at(const std::string& x, const std::string& y) const {
    auto it = hom.find({x, y});
    if (it == hom.end()) throw precondition_error("no hom object for [" + x + "," + y + "]");
    return it->second;
  }
  TypedMultimap rev_at(const std::string& x, const std::string& y) const {
    auto it = rev.find({x, y});
    if (it == rev.end()) throw precondition_error("no evaluation for [" + x + "," + y + "]");
    return {{hom_at(x, y), x}, y, it->second};
  }
};

inline Report check_closed(const Multicat& X, const ClosedData& cd,
                           std::size_t max_context = 2) {
  Report rep;
  auto& typing = rep.add("evaluation-typing");
  for (auto& x : X.objects) {
    for (auto& y : X.objects) {
      ++typing.instances;
      try {
        TypedMultimap r = cd.rev_at(x, y);
        auto& h = X.hom(r.src, r.tgt);
        if (!std::binary_search(h.begin(), h.end(), r.val))
          typing.fail_case("evaluation for [" + x + "," + y + "] is not a multimap ([" +
                           x + "," + y + "]," + x + ")->" + y);
      } catch (const precondition_error& e) {
        typing.fail_case(e.what());
      } catch (const size_guard_error&) {
        typing.exhausted = true;
      }
    }
  }
  if (typing.verdict == Verdict::fail) return rep;

  auto seqs = object_sequences(X.objects, max_context);
  auto& right = rep.add("right-evaluation-bijection");
  for (auto& x : X.objects) {
    for (auto& y : X.objects) {
      TypedMultimap r = cd.rev_at(x, y);
      for (auto& z : seqs) {
        ++right.instances;
        std::vector<std::string> zx = z;
        zx.push_back(x);
        Verdict v = bijection_by_composition(
            X, z, cd.hom_at(x, y), zx, y, [&](const TypedMultimap& g) {
              return X.compose(r, {g, X.unit(x)});
            });
        if (v == Verdict::fail)
          right.fail_case("pasting the evaluation is not bijective on " + seq_str(z) +
                          "->[" + x + "," + y + "]");
        if (v == Verdict::unknown) right.exhausted = true;
      }
    }
  }
  auto& left = rep.add("left-evaluation-bijection");
  for (auto& x : X.objects) {
    for (auto& y : X.objects) {
      TypedMultimap l = X.act(cd.rev_at(x, y), {1, 0});  // (x,[x,y]) -> y
      for (auto& z : seqs) {
        ++left.instances;
        std::vector<std::string> xz = {x};
        xz.insert(xz.end(), z.begin(), z.end());
        Verdict v = bijection_by_composition(
            X, z, cd.hom_at(x, y), xz, y, [&](const TypedMultimap& g) {
              return X.compose(l, {X.unit(x), g});
            });
        if (v == Verdict::fail)
          left.fail_case("pasting the left evaluation is not bijective on " + seq_str(z) +
                         "->[" + x + "," + y + "]");
        if (v == Verdict::unknown) left.exhausted = true;
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The closed structure induced on linear maps: unit object, hom assignment,
// and the canonical i/j/L morphisms obtained by factoring through the
// evaluation.  The axiom report re-checks the closed-category equations.

struct ClosedStructure {
  std::string e;
  std::map<std::pair<std::string, std::string>, std::string> hom;
  std::map<std::string, TypedMultimap> i;  // a -> [e,a]
  std::map<std::string, TypedMultimap> j;  // e -> [a,a]
  std::map<std::vector<std::string>, TypedMultimap> L;  // [b,c] -> [[a,b],[a,c]]
  Report axioms;
};

inline TypedMultimap find_unique_multimap(
    const Multicat& X, const std::vector<std::string>& src, const std::string& tgt,
    const std::function<bool(const TypedMultimap&)>& pred, const std::string& what) {
  const std::vector<Elem>* h;
  try {
    h = &X.hom(src, tgt);
  } catch (const size_guard_error&) {
    throw precondition_error("hom set too large while solving for " + what);
  }
  const Elem* found = nullptr;
  for (auto& v : *h) {
    if (pred({src, tgt, v})) {
      if (found) throw precondition_error("solution for " + what + " is not unique");
      found = &v;
    }
  }
  if (!found) throw precondition_error("no solution for " + what);
  return {src, tgt, *found};
}

// The hom functor on linear maps: [f,g] : [x,y] -> [x',y'] for f : x' -> x
// and g : y -> y', characterised by pasting with the evaluations.
inline TypedMultimap hom_map(const Multicat& X, const ClosedData& cd,
                             const TypedMultimap& f, const TypedMultimap& g) {
  const std::string &xp = f.src.at(0), &x = f.tgt, &y = g.src.at(0), &yp = g.tgt;
  TypedMultimap t =
      X.compose(g, {X.compose(cd.rev_at(x, y), {X.unit(cd.hom_at(x, y)), f})});
  return find_unique_multimap(
      X, {cd.hom_at(x, y)}, cd.hom_at(xp, yp),
      [&](const TypedMultimap& h) {
        return X.compose(cd.rev_at(xp, yp), {h, X.unit(xp)}) == t;
      },
      "[" + clip(f.val.str(), 20) + "," + clip(g.val.str(), 20) + "]");
}

inline ClosedStructure derive_closed_structure(const Multicat& X, const ClosedData& cd,
                                               const TypedMultimap& u) {
  if (!u.src.empty()) throw precondition_error("unit multimap must have empty source");
  ClosedStructure S;
  S.e = u.tgt;
  S.hom = cd.hom;

  for (auto& a : X.objects) {
    // i_a : a -> [e,a], the curried form of the map killing the unit input
    TypedMultimap hi = find_unique_multimap(
        X, {a, S.e}, a,
        [&](const TypedMultimap& h) { return X.compose(h, {X.unit(a), u}) == X.unit(a); },
        "the section over " + a + " of the unit input");
    S.i.emplace(a, find_unique_multimap(
                       X, {a}, cd.hom_at(S.e, a),
                       [&](const TypedMultimap& g) {
                         return X.compose(cd.rev_at(S.e, a), {g, X.unit(S.e)}) == hi;
                       },
                       "i at " + a));
    // j_a : e -> [a,a], the curried identity
    TypedMultimap hj = find_unique_multimap(
        X, {S.e, a}, a,
        [&](const TypedMultimap& h) { return X.compose(h, {u, X.unit(a)}) == X.unit(a); },
        "the cosection over " + a + " of the unit input");
    S.j.emplace(a, find_unique_multimap(
                       X, {S.e}, cd.hom_at(a, a),
                       [&](const TypedMultimap& g) {
                         return X.compose(cd.rev_at(a, a), {g, X.unit(a)}) == hj;
                       },
                       "j at " + a));
  }

  for (auto& a : X.objects) {
    for (auto& b : X.objects) {
      for (auto& c : X.objects) {
        const std::string &bc = cd.hom_at(b, c), &ab = cd.hom_at(a, b), &ac = cd.hom_at(a, c);
        TypedMultimap t =
            X.compose(cd.rev_at(b, c), {X.unit(bc), cd.rev_at(a, b)});
        TypedMultimap s = find_unique_multimap(
            X, {bc, ab}, ac,
            [&](const TypedMultimap& h) {
              return X.compose(cd.rev_at(a, c), {h, X.unit(a)}) == t;
            },
            "the half-curried composition at (" + a + "," + b + "," + c + ")");
        S.L.emplace(std::vector<std::string>{a, b, c},
                    find_unique_multimap(
                        X, {bc}, cd.hom_at(ab, ac),
                        [&](const TypedMultimap& g) {
                          return X.compose(cd.rev_at(ab, ac), {g, X.unit(ab)}) == s;
                        },
                        "L at (" + a + "," + b + "," + c + ")"));
      }
    }
  }

  // The closed-category equations.  A failure here signals an upstream bug:
  // the constructions above already used the defining universal properties.
  auto comp1 = [&](const TypedMultimap& g, const TypedMultimap& f) {
    return X.compose(g, {f});
  };
  auto& tri_j = S.axioms.add("unit-triangle-j");
  for (auto& a : X.objects)
    for (auto& b : X.objects) {
      ++tri_j.instances;
      if (!(comp1(S.L.at({a, b, b}), S.j.at(b)) == S.j.at(cd.hom_at(a, b))))
        tri_j.fail_case("triangle for j fails at (" + a + "," + b + ")");
    }
  auto& tri_i = S.axioms.add("unit-triangle-i");
  for (auto& a : X.objects)
    for (auto& b : X.objects) {
      ++tri_i.instances;
      TypedMultimap lhs =
          comp1(hom_map(X, cd, S.j.at(a), X.unit(cd.hom_at(a, b))), S.L.at({a, a, b}));
      if (!(lhs == S.i.at(cd.hom_at(a, b))))
        tri_i.fail_case("triangle for i fails at (" + a + "," + b + ")");
    }
  auto& pent = S.axioms.add("composition-pentagon");
  for (auto& a : X.objects)
    for (auto& b : X.objects)
      for (auto& c : X.objects)
        for (auto& d : X.objects) {
          ++pent.instances;
          const std::string &ab = cd.hom_at(a, b), &ac = cd.hom_at(a, c),
                            &ad = cd.hom_at(a, d), &bc = cd.hom_at(b, c);
          TypedMultimap lhs =
              comp1(hom_map(X, cd, X.unit(bc), S.L.at({a, b, d})), S.L.at({b, c, d}));
          TypedMultimap rhs =
              comp1(hom_map(X, cd, S.L.at({a, b, c}), X.unit(cd.hom_at(ab, ad))),
                    comp1(S.L.at({ab, ac, ad}), S.L.at({a, c, d})));
          if (!(lhs == rhs))
            pent.fail_case("pentagon fails at (" + a + "," + b + "," + c + "," + d + ")");
        }
  auto& sq = S.axioms.add("unit-square");
  for (auto& a : X.objects)
    for (auto& b : X.objects) {
      ++sq.instances;
      TypedMultimap lhs =
          comp1(hom_map(X, cd, S.i.at(a), X.unit(cd.hom_at(S.e, b))), S.L.at({S.e, a, b}));
      TypedMultimap rhs = hom_map(X, cd, X.unit(a), S.i.at(b));
      if (!(lhs == rhs)) sq.fail_case("unit square fails at (" + a + "," + b + ")");
    }
  auto& iso = S.axioms.add("i-isomorphism");
  for (auto& a : X.objects) {
    ++iso.instances;
    const std::string& ea = cd.hom_at(S.e, a);
    bool found = false;
    for (auto& v : X.hom({ea}, a)) {
      TypedMultimap cand{{ea}, a, v};
      if (comp1(cand, S.i.at(a)) == X.unit(a) && comp1(S.i.at(a), cand) == X.unit(ea)) {
        found = true;
        break;
      }
    }
    if (!found) iso.fail_case("i at " + a + " has no two-sided inverse");
  }
  return S;
}

// ---------------------------------------------------------------------------
// The multicategory of a monoidal category: homs are V(tensor of the
// sources, target).  The tensor is supplied as explicit tables together
// with its coherence morphisms; nothing is synthesised silently.

struct FiniteMonoidal {
  FinCategory cat;
  // n-ary tensor on objects and on morphism indices
  std::function<std::string(const std::vector<std::string>&)> tensor_obj;
  std::function<std::size_t(const std::vector<std::size_t>&)> tensor_mor;
  // coherence tensor(flat concatenation) -> tensor(blockwise tensors)
  std::function<std::size_t(const std::vector<std::vector<std::string>>&)> to_nested;
  // coherence tensor(x permuted by sigma) -> tensor(x)
  std::function<std::size_t(const std::vector<std::string>&, const Perm&)> braid;
};

inline Multicat UV_from_monoidal(const FiniteMonoidal& V, std::string name) {
  auto Vp = std::make_shared<FiniteMonoidal>(V);
  for (auto& x : V.cat.objects)
    if (V.tensor_obj({x}) != x)
      throw precondition_error("tensor tables must be strict on singletons at " + x);
  Multicat X;
  X.name = std::move(name);
  X.objects = V.cat.objects;
  X.hom_fn = [Vp](const std::vector<std::string>& src, const std::string& tgt) {
    std::vector<Elem> out;
    for (auto m : Vp->cat.hom(Vp->tensor_obj(src), tgt))
      out.push_back(Elem::atom(Vp->cat.morphisms[m].label));
    return out;
  };
  X.unit_fn = [Vp](const std::string& x) {
    return Elem::atom(Vp->cat.morphisms[Vp->cat.id(x)].label);
  };
  X.compose_fn = [Vp](const TypedMultimap& g, const std::vector<TypedMultimap>& fs) {
    std::vector<std::vector<std::string>> blocks;
    std::vector<std::size_t> parts;
    for (auto& f : fs) {
      blocks.push_back(f.src);
      parts.push_back(Vp->cat.mor_index(f.val.name()));
    }
    std::size_t nested = Vp->to_nested(blocks);
    std::size_t tens = Vp->tensor_mor(parts);
    std::size_t gi = Vp->cat.mor_index(g.val.name());
    return Elem::atom(
        Vp->cat.morphisms[Vp->cat.then(nested, Vp->cat.then(tens, gi))].label);
  };
  X.swap_fn = [Vp](const TypedMultimap& f, std::size_t k) {
    Perm s = perm_identity(f.src.size());
    std::swap(s[k], s[k + 1]);
    std::size_t b = Vp->braid(f.src, s);
    std::size_t fi = Vp->cat.mor_index(f.val.name());
    return Elem::atom(Vp->cat.morphisms[Vp->cat.then(b, fi)].label);
  };
  return X;
}

// One-object monoidal category of a commutative monoid; all coherences are
// identities, the braiding is trivial because the tensor is multiplication.
inline FiniteMonoidal monoid_monoidal(const FinCategory& M) {
  if (M.objects.size() != 1)
    throw precondition_error("monoid tensor needs a one-object category");
  for (std::size_t i = 0; i < M.morphisms.size(); ++i)
    for (std::size_t j = 0; j < M.morphisms.size(); ++j)
      if (M.then(i, j) != M.then(j, i))
        throw precondition_error("tensor by multiplication needs a commutative monoid");
  auto Mp = std::make_shared<FinCategory>(M);
  std::string star = M.objects[0];
  FiniteMonoidal V;
  V.cat = M;
  V.tensor_obj = [star](const std::vector<std::string>&) { return star; };
  V.tensor_mor = [Mp, star](const std::vector<std::size_t>& ms) {
    std::size_t acc = Mp->id(star);
    for (auto m : ms) acc = Mp->then(acc, m);
    return acc;
  };
  V.to_nested = [Mp, star](const std::vector<std::vector<std::string>>&) {
    return Mp->id(star);
  };
  V.braid = [Mp, star](const std::vector<std::string>&, const Perm&) {
    return Mp->id(star);
  };
  return V;
}

// A finite poset as a category: at most one morphism between two objects.
inline FinCategory poset_category(const std::vector<std::string>& elems,
                                  const std::function<bool(const std::string&, const std::string&)>& leq) {
  FinCategory c;
  c.objects = elems;
  for (auto& a : elems)
    for (auto& b : elems)
      if (leq(a, b)) c.morphisms.push_back({"le(" + a + "," + b + ")", a, b});
  for (auto& a : elems) {
    if (!leq(a, a)) throw precondition_error("order is not reflexive at " + a);
    c.identities[a] = c.mor_index("le(" + a + "," + a + ")");
  }
  for (std::size_t i = 0; i < c.morphisms.size(); ++i)
    for (std::size_t j = 0; j < c.morphisms.size(); ++j)
      if (c.morphisms[i].tgt == c.morphisms[j].src) {
        if (!leq(c.morphisms[i].src, c.morphisms[j].tgt))
          throw precondition_error("order is not transitive");
        c.comp[{i, j}] =
            c.mor_index("le(" + c.morphisms[i].src + "," + c.morphisms[j].tgt + ")");
      }
  return c;
}

// Meet-semilattice tensor on a poset; all coherence morphisms are the unique
// comparison maps, which exist because meets agree up to order.
inline FiniteMonoidal meet_monoidal(
    const std::vector<std::string>& elems, const std::string& top,
    const std::function<bool(const std::string&, const std::string&)>& leq,
    const std::function<std::string(const std::string&, const std::string&)>& meet) {
  for (auto& a : elems)
    for (auto& b : elems) {
      if (meet(a, b) != meet(b, a)) throw precondition_error("meet is not commutative");
      for (auto& c : elems)
        if (meet(meet(a, b), c) != meet(a, meet(b, c)))
          throw precondition_error("meet is not associative");
    }
  auto cat = std::make_shared<FinCategory>(poset_category(elems, leq));
  auto fold = [meet, top](const std::vector<std::string>& xs) {
    std::string acc = top;
    for (auto& x : xs) acc = meet(acc, x);
    return acc;
  };
  FiniteMonoidal V;
  V.cat = *cat;
  V.tensor_obj = fold;
  V.tensor_mor = [cat, fold](const std::vector<std::size_t>& ms) {
    std::vector<std::string> doms, cods;
    for (auto m : ms) {
      doms.push_back(cat->morphisms[m].src);
      cods.push_back(cat->morphisms[m].tgt);
    }
    return cat->mor_index("le(" + fold(doms) + "," + fold(cods) + ")");
  };
  V.to_nested = [cat, fold](const std::vector<std::vector<std::string>>& blocks) {
    std::vector<std::string> flat;
    for (auto& b : blocks) flat.insert(flat.end(), b.begin(), b.end());
    return cat->id(fold(flat));
  };
  V.braid = [cat, fold](const std::vector<std::string>& xs, const Perm&) {
    return cat->id(fold(xs));
  };
  return V;
}

// The skeleton of finite sets up to a size bound, with cartesian product as
// tensor.  Objects are sizes; a function is tabulated by its value digits.
// Tensors whose product leaves the universe raise the size guard.
inline std::string skeleton_fn_label(std::size_t m, std::size_t n,
                                     const std::vector<std::size_t>& values) {
  std::string s = std::to_string(m) + "->" + std::to_string(n) + "[";
  for (auto v : values) s += std::to_string(v);
  return s + "]";
}

inline FinCategory finset_skeleton(std::size_t max_size) {
  guard(max_size <= 9, "skeleton sizes above 9 exceed the label scheme");
  FinCategory c;
  for (std::size_t n = 0; n <= max_size; ++n) c.objects.push_back(std::to_string(n));
  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>, std::size_t> idx;
  for (std::size_t m = 0; m <= max_size; ++m)
    for (std::size_t n = 0; n <= max_size; ++n) {
      if (m > 0 && n == 0) continue;
      std::vector<std::size_t> radix(m, n);
      for_each_tuple(radix, [&](const std::vector<std::size_t>& vals) {
        idx[{m, n, vals}] = c.morphisms.size();
        c.morphisms.push_back(
            {skeleton_fn_label(m, n, vals), std::to_string(m), std::to_string(n)});
        return true;
      });
    }
  for (std::size_t n = 0; n <= max_size; ++n) {
    std::vector<std::size_t> vals;
    for (std::size_t v = 0; v < n; ++v) vals.push_back(v);
    c.identities[std::to_string(n)] = idx.at({n, n, vals});
  }
  auto values_of = [&](std::size_t i) {
    auto& lab = c.morphisms[i].label;
    std::vector<std::size_t> vals;
    for (std::size_t p = lab.find('[') + 1; lab[p] != ']'; ++p)
      vals.push_back(static_cast<std::size_t>(lab[p] - '0'));
    return vals;
  };
  for (std::size_t i = 0; i < c.morphisms.size(); ++i)
    for (std::size_t j = 0; j < c.morphisms.size(); ++j) {
      if (c.morphisms[i].tgt != c.morphisms[j].src) continue;
      auto vi = values_of(i), vj = values_of(j);
      std::vector<std::size_t> vals;
      for (auto v : vi) vals.push_back(vj[v]);
      std::size_t m = vi.size(), n = std::stoul(c.morphisms[j].tgt);
      c.comp[{i, j}] = idx.at({m, n, vals});
    }
  return c;
}

inline FiniteMonoidal cartesian_skeleton_monoidal(std::size_t max_size) {
  auto cat = std::make_shared<FinCategory>(finset_skeleton(max_size));
  // first factor most significant, consistently for every re-indexing
  auto encode = [](const std::vector<std::size_t>& digits,
                   const std::vector<std::size_t>& radix) {
    std::size_t v = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) v = v * radix[i] + digits[i];
    return v;
  };
  auto decode = [](std::size_t v, const std::vector<std::size_t>& radix) {
    std::vector<std::size_t> digits(radix.size(), 0);
    for (std::size_t i = radix.size(); i-- > 0;) {
      digits[i] = v % radix[i];
      v /= radix[i];
    }
    return digits;
  };
  auto prod = [max_size](const std::vector<std::size_t>& sizes) {
    std::size_t p = 1;
    for (auto s : sizes) {
      p *= s;
      guard(p <= max_size, "tensor outside the object universe");
    }
    return p;
  };
  auto lookup = [cat](std::size_t m, std::size_t n, const std::vector<std::size_t>& vals) {
    return cat->mor_index(skeleton_fn_label(m, n, vals));
  };
  FiniteMonoidal V;
  V.cat = *cat;
  V.tensor_obj = [prod](const std::vector<std::string>& xs) {
    std::vector<std::size_t> sizes;
    for (auto& x : xs) sizes.push_back(std::stoul(x));
    return std::to_string(prod(sizes));
  };
  V.tensor_mor = [cat, encode, decode, prod, lookup](const std::vector<std::size_t>& ms) {
    std::vector<std::size_t> dr, cr;
    std::vector<std::vector<std::size_t>> tables;
    for (auto m : ms) {
      dr.push_back(std::stoul(cat->morphisms[m].src));
      cr.push_back(std::stoul(cat->morphisms[m].tgt));
      std::vector<std::size_t> vals;
      auto& lab = cat->morphisms[m].label;
      for (std::size_t p = lab.find('[') + 1; lab[p] != ']'; ++p)
        vals.push_back(static_cast<std::size_t>(lab[p] - '0'));
      tables.push_back(std::move(vals));
    }
    std::size_t dp = prod(dr), cp = prod(cr);
    std::vector<std::size_t> vals;
    for (std::size_t v = 0; v < dp; ++v) {
      auto digits = decode(v, dr);
      std::vector<std::size_t> out(digits.size());
      for (std::size_t i = 0; i < digits.size(); ++i) out[i] = tables[i][digits[i]];
      vals.push_back(encode(out, cr));
    }
    return lookup(dp, cp, vals);
  };
  V.to_nested = [cat, prod](const std::vector<std::vector<std::string>>& blocks) {
    // positional arithmetic makes blockwise re-encoding the identity
    std::vector<std::size_t> sizes;
    for (auto& b : blocks)
      for (auto& x : b) sizes.push_back(std::stoul(x));
    return cat->id(std::to_string(prod(sizes)));
  };
  V.braid = [cat, encode, decode, prod, lookup](const std::vector<std::string>& xs,
                                                const Perm& sigma) {
    std::vector<std::size_t> sizes;
    for (auto& x : xs) sizes.push_back(std::stoul(x));
    std::vector<std::size_t> permuted(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) permuted[i] = sizes[sigma[i]];
    Perm inv = perm_inverse(sigma);
    std::size_t p = prod(sizes);
    std::vector<std::size_t> vals;
    for (std::size_t v = 0; v < p; ++v) {
      auto digits = decode(v, permuted);
      std::vector<std::size_t> out(digits.size());
      for (std::size_t i = 0; i < sizes.size(); ++i) out[i] = digits[inv[i]];
      vals.push_back(encode(out, sizes));
    }
    return lookup(p, p, vals);
  };
  return V;
}

// ---------------------------------------------------------------------------
// A category equipped with a set of elements per object and a function per
// morphism, functorially.

struct CategoryOverSet {
  FinCategory cat;
  std::map<std::string, SetObj> carrier;
  std::map<std::string, SetMor> action;  // keyed by morphism label

  const SetObj& carrier_of(const std::string& o) const {
    auto it = carrier.find(o);
    if (it == carrier.end()) throw precondition_error("no carrier for object " + o);
    return it->second;
  }
  const SetMor& action_of(const std::string& label) const {
    auto it = action.find(label);
    if (it == action.end()) throw precondition_error("no action for morphism " + label);
    return it->second;
  }
};

inline Report validate_category_over_set(const CategoryOverSet& A) {
  Report rep;
  auto& typing = rep.add("carrier-typing");
  for (auto& o : A.cat.objects) {
    ++typing.instances;
    if (!A.carrier.count(o)) typing.fail_case("no carrier for object " + o);
  }
  for (auto& m : A.cat.morphisms) {
    ++typing.instances;
    auto it = A.action.find(m.label);
    if (it == A.action.end()) {
      typing.fail_case("no action for morphism " + m.label);
      continue;
    }
    if (!(it->second.dom == A.carrier_of(m.src)) || !(it->second.cod == A.carrier_of(m.tgt)) ||
        !it->second.total())
      typing.fail_case("action of " + m.label + " is not a function between the carriers");
  }
  if (typing.verdict == Verdict::fail) return rep;
  auto& funct = rep.add("functoriality");
  for (auto& o : A.cat.objects) {
    ++funct.instances;
    if (!(A.action_of(A.cat.morphisms[A.cat.id(o)].label) ==
          FinSetBase::identity(A.carrier_of(o))))
      funct.fail_case("identity of " + o + " does not act as the identity");
  }
  for (auto& [fg, h] : A.cat.comp) {
    ++funct.instances;
    auto& f = A.cat.morphisms[fg.first];
    auto& g = A.cat.morphisms[fg.second];
    if (!(FinSetBase::compose(A.action_of(g.label), A.action_of(f.label)) ==
          A.action_of(A.cat.morphisms[h].label)))
      funct.fail_case("composite " + f.label + " ; " + g.label + " acts wrongly");
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The separately-functorial multimap construction.  A multimap is a
// multifunction on carriers together with, per input variable and fixing of
// the other inputs, a morphism of the base category whose action is the
// corresponding slice.  Tables are kept at the index level internally.

struct FTables {
  std::vector<std::string> src;
  std::string tgt;
  std::map<std::vector<std::size_t>, std::size_t> obj;
  std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::string> part;
};

inline std::vector<std::size_t> carrier_radix(const CategoryOverSet& A,
                                              const std::vector<std::string>& src) {
  std::vector<std::size_t> r;
  for (auto& s : src) r.push_back(A.carrier_of(s).size());
  return r;
}

inline Elem encode_ftables(const CategoryOverSet& A, const FTables& t) {
  const SetObj& cod = A.carrier_of(t.tgt);
  if (t.src.empty()) return cod[t.obj.at({})];
  std::vector<Elem> obj_cells;
  for_each_tuple(carrier_radix(A, t.src), [&](const std::vector<std::size_t>& w) {
    obj_cells.push_back(cod[t.obj.at(w)]);
    return true;
  });
  std::vector<Elem> part_cells;
  for (std::size_t i = 0; i < t.src.size(); ++i) {
    std::vector<std::size_t> rz;
    for (std::size_t j = 0; j < t.src.size(); ++j)
      if (j != i) rz.push_back(A.carrier_of(t.src[j]).size());
    for_each_tuple(rz, [&](const std::vector<std::size_t>& z) {
      part_cells.push_back(Elem::atom(t.part.at({i, z})));
      return true;
    });
  }
  return Elem::tuple({Elem::tuple(std::move(obj_cells)), Elem::tuple(std::move(part_cells))});
}

inline FTables decode_ftables(const CategoryOverSet& A, const std::vector<std::string>& src,
                              const std::string& tgt, const Elem& e) {
  FTables t{src, tgt, {}, {}};
  const SetObj& cod = A.carrier_of(tgt);
  if (src.empty()) {
    t.obj[{}] = index_of(cod, e);
    return t;
  }
  if (e.kind() != Elem::Kind::tuple || e.items().size() != 2)
    throw precondition_error("malformed multimap value " + clip(e.str()));
  const auto& obj_cells = e.items()[0].items();
  std::size_t c = 0;
  for_each_tuple(carrier_radix(A, src), [&](const std::vector<std::size_t>& w) {
    t.obj[w] = index_of(cod, obj_cells.at(c++));
    return true;
  });
  const auto& part_cells = e.items()[1].items();
  c = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    std::vector<std::size_t> rz;
    for (std::size_t j = 0; j < src.size(); ++j)
      if (j != i) rz.push_back(A.carrier_of(src[j]).size());
    for_each_tuple(rz, [&](const std::vector<std::size_t>& z) {
      t.part[{i, z}] = part_cells.at(c++).name();
      return true;
    });
  }
  return t;
}

inline std::vector<std::size_t> tuple_insert(const std::vector<std::size_t>& z,
                                             std::size_t i, std::size_t v) {
  std::vector<std::size_t> w = z;
  w.insert(w.begin() + static_cast<std::ptrdiff_t>(i), v);
  return w;
}

inline std::vector<Elem> enumerate_fmultimaps(const CategoryOverSet& A,
                                              const std::vector<std::string>& src,
                                              const std::string& tgt, std::size_t max_hom,
                                              std::size_t max_steps) {
  for (auto& s : src)
    if (!A.cat.has_object(s)) throw precondition_error("unknown object " + s);
  const SetObj& cod = A.carrier_of(tgt);
  if (src.empty()) return cod;

  auto radix = carrier_radix(A, src);
  std::vector<std::vector<std::size_t>> tuples;
  for_each_tuple(radix, [&](const std::vector<std::size_t>& w) {
    tuples.push_back(w);
    return true;
  });
  if (!tuples.empty() && cod.empty()) return {};
  checked_pow(cod.empty() ? 1 : cod.size(), tuples.size(), max_steps);

  std::size_t steps = 0;
  std::vector<Elem> out;
  std::vector<std::size_t> f0_radix(tuples.size(), cod.size());
  for_each_tuple(f0_radix, [&](const std::vector<std::size_t>& choice) {
    FTables t{src, tgt, {}, {}};
    for (std::size_t k = 0; k < tuples.size(); ++k) t.obj[tuples[k]] = choice[k];
    // per variable and fixing, the morphisms whose action matches the slice
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> slots;
    std::vector<std::vector<std::string>> cands;
    bool stuck = false;
    for (std::size_t i = 0; i < src.size() && !stuck; ++i) {
      const SetObj& dom_i = A.carrier_of(src[i]);
      std::vector<std::size_t> rz;
      for (std::size_t j = 0; j < src.size(); ++j)
        if (j != i) rz.push_back(radix[j]);
      for_each_tuple(rz, [&](const std::vector<std::size_t>& z) {
        std::vector<std::string> ok;
        for (auto m : A.cat.hom(src[i], tgt)) {
          guard(++steps <= max_steps, "multimap enumeration exceeds step budget");
          const SetMor& act = A.action_of(A.cat.morphisms[m].label);
          bool match = true;
          for (std::size_t v = 0; v < dom_i.size(); ++v)
            if (!(act(dom_i[v]) == cod[t.obj.at(tuple_insert(z, i, v))])) {
              match = false;
              break;
            }
          if (match) ok.push_back(A.cat.morphisms[m].label);
        }
        if (ok.empty()) {
          stuck = true;
          return false;
        }
        slots.push_back({i, z});
        cands.push_back(std::move(ok));
        return true;
      });
    }
    if (stuck) return true;
    std::vector<std::size_t> cradix;
    for (auto& c : cands) cradix.push_back(c.size());
    for_each_tuple(cradix, [&](const std::vector<std::size_t>& pick) {
      for (std::size_t k = 0; k < slots.size(); ++k) t.part[slots[k]] = cands[k][pick[k]];
      guard(out.size() < max_hom, "materialised hom set exceeds limit");
      out.push_back(encode_ftables(A, t));
      return true;
    });
    return true;
  });
  return out;
}

inline FTables compose_ftables(const CategoryOverSet& A, const FTables& g,
                               const std::vector<FTables>& fs) {
  FTables h;
  h.tgt = g.tgt;
  std::vector<std::size_t> offset(fs.size() + 1, 0);
  for (std::size_t i = 0; i < fs.size(); ++i) {
    h.src.insert(h.src.end(), fs[i].src.begin(), fs[i].src.end());
    offset[i + 1] = offset[i] + fs[i].src.size();
  }
  auto radix = carrier_radix(A, h.src);
  auto block = [&](const std::vector<std::size_t>& w, std::size_t i) {
    return std::vector<std::size_t>(w.begin() + static_cast<std::ptrdiff_t>(offset[i]),
                                    w.begin() + static_cast<std::ptrdiff_t>(offset[i + 1]));
  };
  for_each_tuple(radix, [&](const std::vector<std::size_t>& w) {
    std::vector<std::size_t> mid;
    for (std::size_t i = 0; i < fs.size(); ++i) mid.push_back(fs[i].obj.at(block(w, i)));
    h.obj[w] = g.obj.at(mid);
    return true;
  });
  for (std::size_t flat = 0; flat < h.src.size(); ++flat) {
    std::size_t istar = 0;
    while (offset[istar + 1] <= flat) ++istar;
    std::size_t jstar = flat - offset[istar];
    std::vector<std::size_t> rz;
    for (std::size_t j = 0; j < h.src.size(); ++j)
      if (j != flat) rz.push_back(radix[j]);
    for_each_tuple(rz, [&](const std::vector<std::size_t>& zflat) {
      // re-inflate to a full tuple with a hole at `flat`
      std::vector<std::size_t> full = tuple_insert(zflat, flat, 0);
      std::vector<std::size_t> z_outer;
      for (std::size_t i = 0; i < fs.size(); ++i)
        if (i != istar) z_outer.push_back(fs[i].obj.at(block(full, i)));
      std::vector<std::size_t> w_inner = block(full, istar);
      w_inner.erase(w_inner.begin() + static_cast<std::ptrdiff_t>(jstar));
      const std::string& inner = fs[istar].part.at({jstar, w_inner});
      const std::string& outer = g.part.at({istar, z_outer});
      std::size_t c = A.cat.then(A.cat.mor_index(inner), A.cat.mor_index(outer));
      h.part[{flat, zflat}] = A.cat.morphisms[c].label;
      return true;
    });
  }
  return h;
}

inline FTables act_ftables(const CategoryOverSet& A, const FTables& f, const Perm& sigma) {
  FTables h;
  h.tgt = f.tgt;
  for (std::size_t i = 0; i < sigma.size(); ++i) h.src.push_back(f.src[sigma[i]]);
  Perm inv = perm_inverse(sigma);
  auto radix = carrier_radix(A, h.src);
  for_each_tuple(radix, [&](const std::vector<std::size_t>& w) {
    std::vector<std::size_t> old(w.size());
    for (std::size_t p = 0; p < w.size(); ++p) old[p] = w[inv[p]];
    h.obj[w] = f.obj.at(old);
    return true;
  });
  for (std::size_t i = 0; i < h.src.size(); ++i) {
    std::vector<std::size_t> rz;
    for (std::size_t j = 0; j < h.src.size(); ++j)
      if (j != i) rz.push_back(radix[j]);
    for_each_tuple(rz, [&](const std::vector<std::size_t>& z) {
      std::vector<std::size_t> full = tuple_insert(z, i, 0);
      std::vector<std::size_t> z_old;
      for (std::size_t p = 0; p < full.size(); ++p)
        if (p != sigma[i]) z_old.push_back(full[inv[p]]);
      h.part[{i, z}] = f.part.at({sigma[i], z_old});
      return true;
    });
  }
  return h;
}

inline Multicat build_F(const CategoryOverSet& A, std::string name,
                        std::size_t max_hom = 100000, std::size_t max_steps = 2000000) {
  auto Ap = std::make_shared<CategoryOverSet>(A);
  Multicat X;
  X.name = std::move(name);
  X.objects = A.cat.objects;
  X.max_hom = max_hom;
  X.hom_fn = [Ap, max_hom, max_steps](const std::vector<std::string>& src,
                                      const std::string& tgt) {
    return enumerate_fmultimaps(*Ap, src, tgt, max_hom, max_steps);
  };
  X.unit_fn = [Ap](const std::string& x) {
    FTables t{{x}, x, {}, {}};
    for (std::size_t v = 0; v < Ap->carrier_of(x).size(); ++v) t.obj[{v}] = v;
    t.part[{0, {}}] = Ap->cat.morphisms[Ap->cat.id(x)].label;
    return encode_ftables(*Ap, t);
  };
  X.compose_fn = [Ap](const TypedMultimap& g, const std::vector<TypedMultimap>& fs) {
    FTables gt = decode_ftables(*Ap, g.src, g.tgt, g.val);
    std::vector<FTables> ft;
    for (auto& f : fs) ft.push_back(decode_ftables(*Ap, f.src, f.tgt, f.val));
    return encode_ftables(*Ap, compose_ftables(*Ap, gt, ft));
  };
  X.swap_fn = [Ap](const TypedMultimap& f, std::size_t k) {
    Perm s = perm_identity(f.src.size());
    std::swap(s[k], s[k + 1]);
    return encode_ftables(
        *Ap, act_ftables(*Ap, decode_ftables(*Ap, f.src, f.tgt, f.val), s));
  };
  return X;
}

// Decoded view of a built multimap: the underlying multifunction on the
// product of the carriers, and the per-variable morphism labels keyed by
// actual carrier elements.
struct MultimapParts {
  SetMor underlying;
  std::map<std::pair<std::size_t, std::vector<Elem>>, std::string> parts;
};

inline MultimapParts decode_multimap(const CategoryOverSet& A, const TypedMultimap& f) {
  FTables t = decode_ftables(A, f.src, f.tgt, f.val);
  std::vector<SetObj> factors;
  for (auto& s : f.src) factors.push_back(A.carrier_of(s));
  MultimapParts out;
  out.underlying = make_mor(FinSetBase::product(factors), A.carrier_of(f.tgt),
                            [&](const Elem& w) {
                              std::vector<std::size_t> idx;
                              for (std::size_t i = 0; i < factors.size(); ++i)
                                idx.push_back(index_of(factors[i], w.items()[i]));
                              return A.carrier_of(f.tgt)[t.obj.at(idx)];
                            });
  for (auto& [key, label] : t.part) {
    std::vector<Elem> z;
    std::size_t pos = 0;
    for (std::size_t j = 0; j < f.src.size(); ++j) {
      if (j == key.first) continue;
      z.push_back(A.carrier_of(f.src[j])[key.second[pos++]]);
    }
    out.parts[{key.first, z}] = label;
  }
  return out;
}

// For arity one the multimap is a morphism of the base category.
inline std::string linear_label(const CategoryOverSet& A, const TypedMultimap& f) {
  if (f.src.size() != 1) throw precondition_error("linear part of a non-linear multimap");
  return decode_ftables(A, f.src, f.tgt, f.val).part.at({0, {}});
}

// ---------------------------------------------------------------------------
// Concrete universes over Set: finite graphs with graph morphisms, and
// finite categories with functors, each acting on objects.

struct GraphUniverse {
  CategoryOverSet over_set;
  std::map<std::string, SetVGraph> graphs;
  std::map<std::string, VMor<FinSetBase>> by_label;
  std::map<std::pair<std::string, std::string>, std::map<VMor<FinSetBase>, std::string>> index;

  std::string label_of(const std::string& a, const std::string& b,
                       const VMor<FinSetBase>& m) const {
    auto it = index.find({a, b});
    if (it == index.end() || !it->second.count(m))
      throw precondition_error("graph morphism not in universe " + a + "->" + b);
    return it->second.at(m);
  }
};

inline GraphUniverse graph_universe(
    const std::vector<std::pair<std::string, SetVGraph>>& items, std::size_t cap = 10000) {
  GraphUniverse U;
  FinCategory& c = U.over_set.cat;
  for (auto& [n, g] : items) {
    if (U.graphs.count(n)) throw precondition_error("duplicate graph name " + n);
    c.objects.push_back(n);
    U.graphs[n] = g;
    U.over_set.carrier[n] = atoms(g.objects);
  }
  for (auto& a : c.objects) {
    for (auto& b : c.objects) {
      auto ms = enumerate_vmors(U.graphs.at(a), U.graphs.at(b), cap);
      for (std::size_t k = 0; k < ms.size(); ++k) {
        std::string label = a + "->" + b + "#" + std::to_string(k);
        c.morphisms.push_back({label, a, b});
        U.by_label[label] = ms[k];
        U.index[{a, b}][ms[k]] = label;
        U.over_set.action[label] =
            make_mor(U.over_set.carrier.at(a), U.over_set.carrier.at(b),
                     [&](const Elem& e) { return Elem::atom(ms[k].obj.at(e.name())); });
      }
    }
  }
  for (auto& a : c.objects)
    c.identities[a] = c.mor_index(U.label_of(a, a, identity_vmor(U.graphs.at(a))));
  for (std::size_t i = 0; i < c.morphisms.size(); ++i)
    for (std::size_t j = 0; j < c.morphisms.size(); ++j) {
      if (c.morphisms[i].tgt != c.morphisms[j].src) continue;
      VMor<FinSetBase> comp =
          compose_vmor(U.by_label.at(c.morphisms[j].label), U.by_label.at(c.morphisms[i].label));
      c.comp[{i, j}] =
          c.mor_index(U.label_of(c.morphisms[i].src, c.morphisms[j].tgt, comp));
    }
  return U;
}

struct CatUniverse {
  CategoryOverSet over_set;
  std::map<std::string, FinCategory> cats;
  std::map<std::string, CatFunctorTable> by_label;
  std::map<std::pair<std::string, std::string>, std::map<CatFunctorTable, std::string>> index;

  std::string label_of(const std::string& a, const std::string& b,
                       const CatFunctorTable& m) const {
    auto it = index.find({a, b});
    if (it == index.end() || !it->second.count(m))
      throw precondition_error("functor not in universe " + a + "->" + b);
    return it->second.at(m);
  }
};

inline CatUniverse cat_universe(const std::vector<std::pair<std::string, FinCategory>>& items,
                                std::size_t cap = 10000) {
  CatUniverse U;
  FinCategory& c = U.over_set.cat;
  for (auto& [n, k] : items) {
    if (U.cats.count(n)) throw precondition_error("duplicate category name " + n);
    c.objects.push_back(n);
    U.cats[n] = k;
    U.over_set.carrier[n] = atoms(k.objects);
  }
  for (auto& a : c.objects) {
    for (auto& b : c.objects) {
      auto ms = FinCatBase::hom_set(U.cats.at(a), U.cats.at(b), cap);
      for (std::size_t k = 0; k < ms.size(); ++k) {
        std::string label = a + "->" + b + "#" + std::to_string(k);
        c.morphisms.push_back({label, a, b});
        U.by_label[label] = ms[k];
        U.index[{a, b}][ms[k]] = label;
        U.over_set.action[label] =
            make_mor(U.over_set.carrier.at(a), U.over_set.carrier.at(b),
                     [&](const Elem& e) { return Elem::atom(ms[k].obj.at(e.name())); });
      }
    }
  }
  for (auto& a : c.objects)
    c.identities[a] = c.mor_index(U.label_of(a, a, FinCatBase::identity(U.cats.at(a))));
  for (std::size_t i = 0; i < c.morphisms.size(); ++i)
    for (std::size_t j = 0; j < c.morphisms.size(); ++j) {
      if (c.morphisms[i].tgt != c.morphisms[j].src) continue;
      CatFunctorTable comp = FinCatBase::compose(U.by_label.at(c.morphisms[j].label),
                                                 U.by_label.at(c.morphisms[i].label));
      c.comp[{i, j}] =
          c.mor_index(U.label_of(c.morphisms[i].src, c.morphisms[j].tgt, comp));
    }
  return U;
}

// ---------------------------------------------------------------------------
// Functors between the built multicategories.  A base functor that commutes
// with the carriers keeps underlying multifunctions and maps the parts.

struct MultiFunctor {
  std::map<std::string, std::string> obj;
  std::function<TypedMultimap(const TypedMultimap&)> map;
};

inline MultiFunctor F1_on_functor(const CategoryOverSet& A, const CategoryOverSet& B,
                                  const CatFunctorTable& F) {
  if (!(F.dom == A.cat) || !(F.cod == B.cat))
    throw precondition_error("functor endpoints do not match the universes");
  if (!functor_table_valid(F)) throw precondition_error("functor tables are not functorial");
  for (auto& o : A.cat.objects) {
    if (!(A.carrier_of(o) == B.carrier_of(F.obj.at(o))))
      throw precondition_error("functor does not commute with carriers at " + o);
  }
  for (auto& m : A.cat.morphisms)
    if (!(A.action_of(m.label).map == B.action_of(F.mor.at(m.label)).map))
      throw precondition_error("functor does not commute with actions at " + m.label);
  auto Ap = std::make_shared<CategoryOverSet>(A);
  auto Bp = std::make_shared<CategoryOverSet>(B);
  auto Fp = std::make_shared<CatFunctorTable>(F);
  MultiFunctor out;
  out.obj = F.obj;
  out.map = [Ap, Bp, Fp](const TypedMultimap& f) {
    FTables t = decode_ftables(*Ap, f.src, f.tgt, f.val);
    FTables r;
    for (auto& s : t.src) r.src.push_back(Fp->obj.at(s));
    r.tgt = Fp->obj.at(t.tgt);
    r.obj = t.obj;  // carriers agree, so index tables carry over
    for (auto& [k, label] : t.part) r.part[k] = Fp->mor.at(label);
    TypedMultimap g;
    g.src = r.src;
    g.tgt = r.tgt;
    g.val = encode_ftables(*Bp, r);
    return g;
  };
  return out;
}

inline Report check_multifunctor(const Multicat& XA, const Multicat& XB,
                                 const MultiFunctor& F, MulticatLimits lim = {}) {
  Report rep;
  auto seqs = object_sequences(XA.objects, lim.max_arity);
  std::vector<TypedMultimap> all;
  bool truncated = false;
  for (auto& s : seqs)
    for (auto& t : XA.objects) {
      try {
        for (auto& v : XA.hom(s, t)) all.push_back({s, t, v});
      } catch (const size_guard_error&) {
        truncated = true;
      }
    }

  auto& units = rep.add("preserves-units");
  units.exhausted = truncated;
  for (auto& x : XA.objects) {
    ++units.instances;
    if (!(F.map(XA.unit(x)) == XB.unit(F.obj.at(x))))
      units.fail_case("unit of " + x + " is not preserved");
  }
  auto& acts = rep.add("preserves-actions");
  acts.exhausted = truncated;
  for (auto& f : all) {
    if (f.src.size() < 2) continue;
    for (auto& sg : all_perms(f.src.size())) {
      if (acts.instances >= lim.max_instances) {
        acts.exhausted = true;
        break;
      }
      ++acts.instances;
      if (!(F.map(XA.act(f, sg)) == XB.act(F.map(f), sg)))
        acts.fail_case("action not preserved at " + clip(f.val.str()) + " : " +
                       seq_str(f.src) + "->" + f.tgt);
    }
  }
  auto& comps = rep.add("preserves-composition");
  comps.exhausted = truncated;
  std::map<std::string, std::vector<TypedMultimap>> into;
  for (auto& f : all) into[f.tgt].push_back(f);
  bool stop = false;
  for (auto& g : all) {
    if (stop || g.src.empty()) continue;
    std::vector<std::size_t> radix;
    bool any_empty = false;
    for (auto& b : g.src) {
      radix.push_back(into[b].size());
      if (into[b].empty()) any_empty = true;
    }
    if (any_empty) continue;
    for_each_tuple(radix, [&](const std::vector<std::size_t>& fi) {
      if (comps.instances >= lim.max_instances) {
        comps.exhausted = true;
        stop = true;
        return false;
      }
      ++comps.instances;
      std::vector<TypedMultimap> fs, mapped;
      for (std::size_t i = 0; i < fi.size(); ++i) {
        fs.push_back(into[g.src[i]][fi[i]]);
        mapped.push_back(F.map(fs.back()));
      }
      if (!(F.map(XA.compose(g, fs)) == XB.compose(F.map(g), mapped)))
        comps.fail_case("composition not preserved at " + clip(g.val.str()) + " : " +
                        seq_str(g.src) + "->" + g.tgt);
      return true;
    });
  }
  return rep;
}

// Components phi_x : (Fx) -> Gx, one per object, natural against every
// multimap: G(f) after the phis equals phi after F(f).
inline Report check_multinatural(const Multicat& XA, const Multicat& XB,
                                 const MultiFunctor& F, const MultiFunctor& G,
                                 const std::map<std::string, Elem>& phi,
                                 MulticatLimits lim = {}) {
  Report rep;
  auto component = [&](const std::string& x) {
    auto it = phi.find(x);
    if (it == phi.end()) throw precondition_error("no component at " + x);
    return TypedMultimap{{F.obj.at(x)}, G.obj.at(x), it->second};
  };
  auto& typing = rep.add("component-typing");
  for (auto& x : XA.objects) {
    ++typing.instances;
    try {
      TypedMultimap c = component(x);
      auto& h = XB.hom(c.src, c.tgt);
      if (!std::binary_search(h.begin(), h.end(), c.val))
        typing.fail_case("component at " + x + " is not a multimap");
    } catch (const precondition_error& e) {
      typing.fail_case(e.what());
    }
  }
  if (typing.verdict == Verdict::fail) return rep;
  auto& nat = rep.add("multinaturality");
  auto seqs = object_sequences(XA.objects, lim.max_arity);
  for (auto& s : seqs) {
    for (auto& t : XA.objects) {
      std::vector<Elem> hom;
      try {
        hom = XA.hom(s, t);
      } catch (const size_guard_error&) {
        nat.exhausted = true;
        continue;
      }
      for (auto& v : hom) {
        if (nat.instances >= lim.max_instances) {
          nat.exhausted = true;
          break;
        }
        ++nat.instances;
        TypedMultimap f{s, t, v};
        std::vector<TypedMultimap> comps;
        for (auto& x : s) comps.push_back(component(x));
        TypedMultimap lhs = XB.compose(G.map(f), comps);
        TypedMultimap rhs = XB.compose(component(t), {F.map(f)});
        if (!(lhs == rhs))
          nat.fail_case("naturality fails at " + clip(v.str()) + " : " + seq_str(s) +
                        "->" + t);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The free symmetric multicategory on one generating hom set whose target
// feeds into nothing: sources pairwise distinct, target not among them.
// Under that shape the multimaps are exactly the identities and the
// generator orbit under the symmetric action, and no multimap has empty
// source — every element set is empty.

inline Multicat free_multicat_isolated_generator(const std::vector<std::string>& sources,
                                                 const std::string& target,
                                                 const std::vector<std::string>& generators) {
  {
    std::set<std::string> seen(sources.begin(), sources.end());
    if (seen.size() != sources.size() || seen.count(target))
      throw precondition_error("generator shape needs distinct sources and a fresh target");
    if (sources.empty()) throw precondition_error("generator needs at least one source");
  }
  auto srcs = std::make_shared<std::vector<std::string>>(sources);
  auto gens = std::make_shared<std::vector<std::string>>(generators);
  auto tgt = std::make_shared<std::string>(target);

  auto orbit_elem = [](const std::string& z, const Perm& sigma) {
    std::vector<Elem> digits{Elem::atom(z)};
    for (auto i : sigma) digits.push_back(Elem::atom(std::to_string(i)));
    return Elem::tuple(std::move(digits));
  };
  auto orbit_perm = [](const Elem& e) {
    Perm p;
    for (std::size_t i = 1; i < e.items().size(); ++i)
      p.push_back(std::stoul(e.items()[i].name()));
    return p;
  };

  Multicat X;
  X.name = "free on an isolated generator";
  X.objects = sources;
  X.objects.push_back(target);
  X.hom_fn = [srcs, gens, tgt, orbit_elem](const std::vector<std::string>& src,
                                           const std::string& t) {
    std::vector<Elem> out;
    if (src.size() == 1 && src[0] == t) out.push_back(Elem::atom("1:" + t));
    if (t == *tgt && src.size() == srcs->size()) {
      // src must read off a permutation of the generator sources
      Perm sigma(src.size());
      bool ok = true;
      for (std::size_t i = 0; i < src.size() && ok; ++i) {
        auto it = std::find(srcs->begin(), srcs->end(), src[i]);
        if (it == srcs->end())
          ok = false;
        else
          sigma[i] = static_cast<std::size_t>(it - srcs->begin());
      }
      if (ok) {
        std::set<std::size_t> distinct(sigma.begin(), sigma.end());
        if (distinct.size() == sigma.size())
          for (auto& z : *gens) out.push_back(orbit_elem(z, sigma));
      }
    }
    return out;
  };
  X.unit_fn = [](const std::string& x) { return Elem::atom("1:" + x); };
  X.compose_fn = [](const TypedMultimap& g, const std::vector<TypedMultimap>& fs) {
    if (g.val.kind() == Elem::Kind::atom) return fs.at(0).val;
    // generator orbit composed with identities only
    return g.val;
  };
  X.swap_fn = [orbit_elem, orbit_perm](const TypedMultimap& f, std::size_t k) {
    if (f.val.kind() == Elem::Kind::atom)
      throw precondition_error("identities admit no transposition");
    Perm s = perm_identity(f.src.size());
    std::swap(s[k], s[k + 1]);
    return orbit_elem(f.val.items()[0].name(), perm_compose(orbit_perm(f.val), s));
  };
  return X;
}

}  // namespace freeprod
