#pragma once

// Paths in set-valued graphs as a monad, and the structures its algebras
// carry: categories as path algebras, functor/transformation homs, jointly
// vs separately functorial multimaps, and the tensor of two categories by
// bounded congruence closure.  Free path images of infinite-hom shape are
// kept presented; every quotient carries the bound it was computed at.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "algebra.hpp"
#include "fincat.hpp"
#include "vgraph.hpp"

namespace freeprod {

// ---------------------------------------------------------------------------
// The free path structure on a set-valued graph: a presented category with
// one generator per edge element and no relations.  Words in it are exactly
// the directed paths, so they are their own normal forms.

struct PathAlgebra {
  SetVGraph base;
  PresentedCategory cat;
  std::map<std::tuple<std::string, std::string, Elem>, std::uint32_t> gen;
  std::vector<Elem> gen_elem;  // edge element per generator
  bool finite = false;         // acyclic base: all paths bounded in length

  // the length-one path on an edge
  Word unit(const std::string& a, const std::string& b, const Elem& e) const {
    auto it = gen.find({a, b, e});
    if (it == gen.end())
      throw precondition_error("no edge " + e.str() + " from " + a + " to " + b);
    return Word{a, b, {it->second}};
  }
};

inline bool has_directed_cycle(const SetVGraph& g) {
  // 0 unseen, 1 on stack, 2 done
  std::map<std::string, int> color;
  std::function<bool(const std::string&)> visit = [&](const std::string& o) {
    color[o] = 1;
    for (const auto& b : g.objects) {
      if (g.at(o, b).empty()) continue;
      int c = color[b];
      if (c == 1) return true;
      if (c == 0 && visit(b)) return true;
    }
    color[o] = 2;
    return false;
  };
  for (const auto& o : g.objects)
    if (color[o] == 0 && visit(o)) return true;
  return false;
}

inline PathAlgebra path_algebra(const SetVGraph& X) {
  X.validate();
  PathAlgebra T;
  T.base = X;
  T.cat.gens.objects = X.objects;
  // plain element names when globally unique, qualified otherwise
  std::map<std::string, std::size_t> uses;
  for (const auto& a : X.objects)
    for (const auto& b : X.objects)
      for (const auto& e : X.at(a, b)) ++uses[e.str()];
  std::set<std::string> taken;
  for (const auto& a : X.objects)
    for (const auto& b : X.objects)
      for (const auto& e : X.at(a, b)) {
        std::string lbl =
            uses[e.str()] == 1 ? e.str() : e.str() + "@" + a + ">" + b;
        while (!taken.insert(lbl).second) lbl += "'";
        T.gen[{a, b, e}] = static_cast<std::uint32_t>(T.cat.gens.edges.size());
        T.gen_elem.push_back(e);
        T.cat.gens.edges.push_back({lbl, a, b});
      }
  T.cat.normalizer = [](Word w) { return w; };
  T.finite = !has_directed_cycle(X);
  T.cat.validate();
  return T;
}

// path flattening: a word of words collapses to its concatenation
inline Word flatten_word(const std::string& src, const std::vector<Word>& ws) {
  Word out = empty_word(src);
  for (const auto& w : ws) out = concat(out, w);
  return out;
}

// the functor between path structures induced by a graph morphism
inline CatFunctor path_map(const PathAlgebra& TX, const PathAlgebra& TY,
                           const VMor<FinSetBase>& f) {
  if (!vmor_valid(TX.base, TY.base, f))
    throw precondition_error("path_map needs a graph morphism");
  CatFunctor F;
  F.obj_map = f.obj;
  F.gen_map.resize(TX.cat.gens.edges.size());
  for (const auto& [k, idx] : TX.gen) {
    const auto& [a, b, e] = k;
    const auto& m = f.homs.at({a, b});
    F.gen_map[idx] = TY.unit(f.obj.at(a), f.obj.at(b), m(e));
  }
  return F;
}

// All paths of length <= max_len, depth first from each object in order.
// The callback may return false to stop early.
template <typename F>
void for_each_path(const FinGraph& g, std::size_t max_len, F&& fn) {
  bool stop = false;
  std::function<void(Word&)> go = [&](Word& w) {
    if (stop) return;
    if (!fn(const_cast<const Word&>(w))) {
      stop = true;
      return;
    }
    if (w.gens.size() == max_len) return;
    for (auto ei : g.edges_from(w.tgt)) {
      std::string save = w.tgt;
      w.gens.push_back(static_cast<std::uint32_t>(ei));
      w.tgt = g.edges[ei].tgt;
      go(w);
      w.gens.pop_back();
      w.tgt = save;
      if (stop) return;
    }
  };
  for (const auto& o : g.objects) {
    Word w = empty_word(o);
    go(w);
    if (stop) return;
  }
}

inline std::vector<Word> paths_upto(const FinGraph& g, std::size_t max_len,
                                    std::size_t cap = 1000000) {
  std::vector<Word> out;
  for_each_path(g, max_len, [&](const Word& w) {
    guard(out.size() < cap, "path enumeration exceeds limit");
    out.push_back(w);
    return true;
  });
  return out;
}

// Materialise the free path structure as a finite category when every path
// fits under max_len; composition is concatenation.  Cyclic bases (or too
// small a bound) yield nullopt.  `reps` receives the path per morphism.
inline std::optional<FinCategory> free_path_category(
    const PathAlgebra& T, std::size_t max_len,
    std::vector<Word>* reps = nullptr) {
  std::vector<Word> all;
  bool over = false;
  for_each_path(T.cat.gens, max_len + 1, [&](const Word& w) {
    if (w.gens.size() > max_len) {
      over = true;
      return false;
    }
    all.push_back(w);
    return true;
  });
  if (over) return std::nullopt;
  std::sort(all.begin(), all.end());
  FinCategory c;
  c.objects = T.cat.gens.objects;
  std::map<Word, std::size_t> idx;
  for (const auto& w : all) {
    idx[w] = c.morphisms.size();
    c.morphisms.push_back({word_str(T.cat.gens, w), w.src, w.tgt});
  }
  for (const auto& o : c.objects) c.identities[o] = idx.at(empty_word(o));
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (all[i].tgt != all[j].src) continue;
      c.comp[{i, j}] = idx.at(concat(all[i], all[j]));
    }
  if (reps) *reps = std::move(all);
  return c;
}

// ---------------------------------------------------------------------------
// Monad shape of the path structure, checked on concrete graphs.  All three
// laws are exercised on enumerated paths and enumerated segmentations; a
// cyclic base leaves longer paths unchecked and flags the check exhausted.

namespace detail {

// ordered segmentations of w into contiguous nonempty blocks, one per cut
// mask; the callback gets the letter blocks
template <typename F>
void for_each_segmentation(const Word& w, F&& fn) {
  const std::size_t n = w.gens.size();
  if (n == 0) {
    fn(std::vector<std::vector<std::uint32_t>>{});
    return;
  }
  const std::size_t masks = std::size_t{1} << (n - 1);
  for (std::size_t mask = 0; mask < masks; ++mask) {
    std::vector<std::vector<std::uint32_t>> parts(1);
    for (std::size_t p = 0; p < n; ++p) {
      parts.back().push_back(w.gens[p]);
      if (p + 1 < n && (mask >> p & 1)) parts.emplace_back();
    }
    fn(parts);
  }
}

// blocks of w as genuine Words, endpoints read off the graph
inline std::vector<Word> split_word(const FinGraph& g, const Word& w,
                                    const std::vector<std::vector<std::uint32_t>>& parts) {
  std::vector<Word> out;
  std::string at = w.src;
  for (const auto& part : parts) {
    Word b = empty_word(at);
    for (auto gi : part) {
      b.gens.push_back(gi);
      b.tgt = g.edges[gi].tgt;
    }
    at = b.tgt;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace detail

inline Report validate_path_monad(const std::vector<SetVGraph>& objs,
                                  std::size_t max_len = 4,
                                  std::size_t max_instances = 20000) {
  Report r;
  std::vector<PathAlgebra> Ts;
  Ts.reserve(objs.size());
  bool truncated = false;
  for (const auto& x : objs) {
    Ts.push_back(path_algebra(x));
    truncated = truncated || !Ts.back().finite;
  }
  std::vector<std::vector<Word>> words;
  for (const auto& T : Ts) words.push_back(paths_upto(T.cat.gens, max_len));

  {
    auto& c = r.add("path-identity-on-objects");
    for (const auto& T : Ts) {
      ++c.instances;
      if (!(T.cat.gens.objects == T.base.objects))
        c.fail_case("object list changed");
    }
  }
  {
    auto& c = r.add("flatten-after-unit");
    c.exhausted = truncated;
    for (std::size_t i = 0; i < Ts.size(); ++i)
      for (const auto& w : words[i]) {
        if (c.instances >= max_instances) break;
        ++c.instances;
        if (!(flatten_word(w.src, {w}) == w))
          c.fail_case(word_str(Ts[i].cat.gens, w));
      }
  }
  {
    auto& c = r.add("flatten-after-letterwise-unit");
    c.exhausted = truncated;
    for (std::size_t i = 0; i < Ts.size(); ++i)
      for (const auto& w : words[i]) {
        if (c.instances >= max_instances) break;
        ++c.instances;
        std::vector<Word> letters;
        std::string at = w.src;
        for (auto gi : w.gens) {
          const auto& e = Ts[i].cat.gens.edges[gi];
          letters.push_back(Word{at, e.tgt, {gi}});
          at = e.tgt;
        }
        if (!(flatten_word(w.src, letters) == w))
          c.fail_case(word_str(Ts[i].cat.gens, w));
      }
  }
  {
    // two nested segmentations: flattening inner blocks first then the
    // outer grouping must agree with flattening everything at once
    auto& c = r.add("flatten-associativity");
    c.exhausted = truncated;
    for (std::size_t i = 0; i < Ts.size(); ++i) {
      const auto& g = Ts[i].cat.gens;
      for (const auto& w : words[i]) {
        if (c.instances >= max_instances) break;
        detail::for_each_segmentation(w, [&](const auto& parts) {
          std::vector<Word> blocks = detail::split_word(g, w, parts);
          // group the block list in all ways
          const std::size_t k = blocks.size();
          const std::size_t masks = k < 2 ? 1 : std::size_t{1} << (k - 1);
          for (std::size_t m = 0; m < masks; ++m) {
            if (c.instances >= max_instances) return;
            ++c.instances;
            std::vector<Word> grouped;
            std::string at = w.src;
            std::vector<Word> cur;
            for (std::size_t p = 0; p < k; ++p) {
              cur.push_back(blocks[p]);
              if (p + 1 == k || (m >> p & 1)) {
                grouped.push_back(flatten_word(at, cur));
                at = grouped.back().tgt;
                cur.clear();
              }
            }
            Word lhs = flatten_word(w.src, grouped);
            Word rhs = flatten_word(w.src, blocks);
            if (!(lhs == w) || !(rhs == w)) c.fail_case(word_str(g, w));
          }
        });
      }
    }
  }
  {
    auto& c = r.add("path-map-naturality");
    c.exhausted = truncated;
    for (std::size_t i = 0; i < Ts.size(); ++i)
      for (std::size_t j = 0; j < Ts.size(); ++j) {
        std::vector<VMor<FinSetBase>> fs;
        try {
          fs = enumerate_vmors(objs[i], objs[j]);
        } catch (const size_guard_error&) {
          c.exhausted = true;
          continue;
        }
        for (const auto& f : fs) {
          CatFunctor F = path_map(Ts[i], Ts[j], f);
          for (const auto& w : words[i]) {
            if (c.instances >= max_instances) break;
            ++c.instances;
            detail::for_each_segmentation(w, [&](const auto& parts) {
              std::vector<Word> blocks =
                  detail::split_word(Ts[i].cat.gens, w, parts);
              std::vector<Word> mapped;
              for (const auto& b : blocks)
                mapped.push_back(F.apply(Ts[i].cat, b));
              Word lhs = F.apply(Ts[i].cat, flatten_word(w.src, blocks));
              Word rhs = flatten_word(F.obj_map.at(w.src), mapped);
              if (!(lhs == rhs)) c.fail_case(word_str(Ts[i].cat.gens, w));
            });
          }
        }
      }
  }
  return r;
}

// ---------------------------------------------------------------------------
// The interleaving map: a path in one factor of a free product of graphs,
// held at a fixed tuple elsewhere, spells out as the word of product-graph
// letters that moves only that coordinate.  Loop letters land in the tagged
// diagonal summand; genuine moves stay raw.

inline Word spell_path(const PathAlgebra& Tprod, std::size_t j,
                       const std::vector<std::string>& at, const Word& p,
                       const PathAlgebra& TXj) {
  if (p.src != at[j])
    throw precondition_error("spelled path starts off its slot");
  std::vector<std::string> cur = at;
  Word out = empty_word(tuple_name(cur));
  for (auto gi : p.gens) {
    const auto& e = TXj.cat.gens.edges[gi];
    const Elem& raw = TXj.gen_elem[gi];
    Elem letter = e.src == e.tgt ? Elem::tagged(j, raw) : raw;
    std::vector<std::string> nxt = cur;
    nxt[j] = e.tgt;
    out = concat(out, Tprod.unit(tuple_name(cur), tuple_name(nxt), letter));
    cur = nxt;
  }
  return out;
}

// the graph morphism between free products induced by one morphism per
// factor: coordinatewise on objects, tag-preserving on diagonal loops
inline VMor<FinSetBase> product_vmor(const FreeProduct<FinSetBase>& P,
                                     const FreeProduct<FinSetBase>& Q,
                                     const std::vector<VMor<FinSetBase>>& fs) {
  if (fs.size() != P.factors.size())
    throw precondition_error("one factor morphism per slot");
  VMor<FinSetBase> out;
  std::vector<std::vector<std::string>> tuples;
  for (const auto& [t, nm] : P.name) tuples.push_back(t);
  auto image = [&](const std::vector<std::string>& t) {
    std::vector<std::string> s(t.size());
    for (std::size_t j = 0; j < t.size(); ++j) s[j] = fs[j].obj.at(t[j]);
    return s;
  };
  for (const auto& t : tuples) out.obj[P.name.at(t)] = Q.name.at(image(t));
  for (const auto& a : tuples)
    for (const auto& b : tuples) {
      const SetObj& dom = P.graph.at(P.name.at(a), P.name.at(b));
      const SetObj& cod = Q.graph.at(Q.name.at(image(a)), Q.name.at(image(b)));
      std::vector<std::size_t> moved;
      for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j] != b[j]) moved.push_back(j);
      SetMor m{dom, cod, {}};
      if (moved.size() == 1) {
        std::size_t j = moved[0];
        const auto& fj = fs[j].homs.at({a[j], b[j]});
        for (const auto& e : dom) m.map.emplace(e, fj(e));
      } else if (moved.empty()) {
        for (const auto& e : dom) {
          std::size_t j = e.tag();
          const auto& fj = fs[j].homs.at({a[j], a[j]});
          m.map.emplace(e, Elem::tagged(j, fj(e.inner())));
        }
      }
      out.homs[{P.name.at(a), P.name.at(b)}] = std::move(m);
    }
  return out;
}

// Coherence of the interleaving on concrete factor lists: unit letters
// spell to unit letters, spelling commutes with flattening and with maps of
// factors, and for two factors it commutes with swapping them.
inline Report validate_path_interleaving(
    const std::vector<std::vector<SetVGraph>>& contexts,
    std::size_t max_len = 3, std::size_t max_instances = 20000) {
  struct Ctx {
    std::vector<SetVGraph> Xs;
    FreeProduct<FinSetBase> P;
    PathAlgebra Tprod;
    std::vector<PathAlgebra> Tf;
    std::vector<std::vector<Word>> paths;
    std::vector<std::vector<std::string>> tuples;
    bool truncated = false;
  };
  std::vector<Ctx> ctxs;
  for (const auto& Xs : contexts) {
    Ctx c;
    c.Xs = Xs;
    c.P = free_product_graphs(Xs);
    c.Tprod = path_algebra(c.P.graph);
    for (const auto& x : Xs) {
      c.Tf.push_back(path_algebra(x));
      c.truncated = c.truncated || !c.Tf.back().finite;
      c.paths.push_back(paths_upto(c.Tf.back().cat.gens, max_len));
    }
    for (const auto& [t, nm] : c.P.name) c.tuples.push_back(t);
    ctxs.push_back(std::move(c));
  }

  Report r;
  {
    // units: each factor edge, spelled as a length-one path, is the
    // corresponding product letter
    auto& cu = r.add("interleave-units");
    for (const auto& c : ctxs) {
      cu.exhausted = cu.exhausted || c.truncated;
      for (const auto& t : c.tuples)
        for (std::size_t j = 0; j < c.Xs.size(); ++j)
          for (const auto& [k, gi] : c.Tf[j].gen) {
            const auto& [a, b, e] = k;
            if (a != t[j]) continue;
            if (cu.instances >= max_instances) break;
            ++cu.instances;
            Word p = Word{a, b, {gi}};
            Word s = spell_path(c.Tprod, j, t, p, c.Tf[j]);
            std::vector<std::string> t2 = t;
            t2[j] = b;
            Elem letter = a == b ? Elem::tagged(j, e) : e;
            Word expect = c.Tprod.unit(tuple_name(t), tuple_name(t2), letter);
            if (!(s == expect)) cu.fail_case(word_str(c.Tprod.cat.gens, s));
          }
    }
  }
  {
    // flattening: spelling a concatenation is the concatenation of
    // spellings, blocks advancing the tuple as they go
    auto& cf = r.add("interleave-flatten");
    for (const auto& c : ctxs) {
      cf.exhausted = cf.exhausted || c.truncated;
      for (const auto& t : c.tuples)
        for (std::size_t j = 0; j < c.Xs.size(); ++j)
          for (const auto& p : c.paths[j]) {
            if (p.src != t[j]) continue;
            if (cf.instances >= max_instances) break;
            detail::for_each_segmentation(p, [&](const auto& parts) {
              if (cf.instances >= max_instances) return;
              ++cf.instances;
              std::vector<Word> blocks =
                  detail::split_word(c.Tf[j].cat.gens, p, parts);
              Word rhs = empty_word(tuple_name(t));
              std::vector<std::string> cur = t;
              for (const auto& b : blocks) {
                rhs = concat(rhs, spell_path(c.Tprod, j, cur, b, c.Tf[j]));
                cur[j] = b.tgt;
              }
              Word lhs = spell_path(c.Tprod, j, t,
                                    flatten_word(t[j], blocks), c.Tf[j]);
              if (!(lhs == rhs)) cf.fail_case(word_str(c.Tprod.cat.gens, lhs));
            });
          }
    }
  }
  {
    // naturality in every factor at once
    auto& cn = r.add("interleave-naturality");
    for (const auto& c : ctxs) {
      cn.exhausted = cn.exhausted || c.truncated;
      std::vector<std::vector<VMor<FinSetBase>>> morlists;
      bool too_big = false;
      for (const auto& x : c.Xs) {
        try {
          morlists.push_back(enumerate_vmors(x, x));
        } catch (const size_guard_error&) {
          too_big = true;
          break;
        }
      }
      if (too_big) {
        cn.exhausted = true;
        continue;
      }
      if (c.Xs.empty()) continue;
      std::vector<std::size_t> radix;
      for (const auto& l : morlists) radix.push_back(l.size());
      for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
        std::vector<VMor<FinSetBase>> fs;
        for (std::size_t j = 0; j < pick.size(); ++j)
          fs.push_back(morlists[j][pick[j]]);
        VMor<FinSetBase> prod_f = product_vmor(c.P, c.P, fs);
        CatFunctor F = path_map(c.Tprod, c.Tprod, prod_f);
        for (const auto& t : c.tuples)
          for (std::size_t j = 0; j < c.Xs.size(); ++j) {
            CatFunctor Fj = path_map(c.Tf[j], c.Tf[j], fs[j]);
            for (const auto& p : c.paths[j]) {
              if (p.src != t[j]) continue;
              if (cn.instances >= max_instances) return false;
              ++cn.instances;
              Word lhs =
                  F.apply(c.Tprod.cat, spell_path(c.Tprod, j, t, p, c.Tf[j]));
              std::vector<std::string> ft(t.size());
              for (std::size_t k2 = 0; k2 < t.size(); ++k2)
                ft[k2] = fs[k2].obj.at(t[k2]);
              Word rhs = spell_path(c.Tprod, j, ft,
                                    Fj.apply(c.Tf[j].cat, p), c.Tf[j]);
              if (!(lhs == rhs)) cn.fail_case(word_str(c.Tprod.cat.gens, lhs));
            }
          }
        return true;
      });
    }
  }
  {
    // symmetry for two factors: transporting the spelled word letterwise
    // through the swap renaming must agree with spelling in the swapped
    // product directly
    auto& cs = r.add("interleave-symmetry");
    for (const auto& c : ctxs) {
      if (c.Xs.size() != 2) continue;
      cs.exhausted = cs.exhausted || c.truncated;
      std::vector<SetVGraph> Ys = {c.Xs[1], c.Xs[0]};
      FreeProduct<FinSetBase> Q = free_product_graphs(Ys);
      PathAlgebra Tq = path_algebra(Q.graph);
      std::map<std::string, std::vector<std::string>> tup_of;
      for (const auto& [tu, nm] : c.P.name) tup_of[nm] = tu;
      auto swap_elem = [](const Elem& e) {
        if (e.kind() == Elem::Kind::tag)
          return Elem::tagged(1 - e.tag(), e.inner());
        return e;
      };
      for (const auto& t : c.tuples)
        for (std::size_t j = 0; j < 2; ++j)
          for (const auto& p : c.paths[j]) {
            if (p.src != t[j]) continue;
            if (cs.instances >= max_instances) break;
            ++cs.instances;
            Word here = spell_path(c.Tprod, j, t, p, c.Tf[j]);
            std::vector<std::string> ts = {t[1], t[0]};
            Word there = spell_path(Tq, 1 - j, ts, p, c.Tf[j]);
            // rename `here` using only its own letters
            Word carried = empty_word(tuple_name(ts));
            for (auto gi : here.gens) {
              const auto& e = c.Tprod.cat.gens.edges[gi];
              const auto& sa = tup_of.at(e.src);
              const auto& sb = tup_of.at(e.tgt);
              carried = concat(
                  carried, Tq.unit(tuple_name({sa[1], sa[0]}),
                                   tuple_name({sb[1], sb[0]}),
                                   swap_elem(c.Tprod.gen_elem[gi])));
            }
            if (!(there == carried)) cs.fail_case(word_str(Tq.cat.gens, there));
          }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Finite categories as path algebras: the carrier graph keeps every
// morphism as an edge, and the action composes a path down to a single
// morphism.  The algebra laws, phrased on paths, are the category axioms.

inline SetVGraph carrier_graph(const FinCategory& c) {
  SetVGraph g;
  g.objects = c.objects;
  std::map<std::pair<std::string, std::string>, std::vector<Elem>> acc;
  for (const auto& m : c.morphisms) acc[{m.src, m.tgt}].push_back(Elem::atom(m.label));
  for (auto& [k, v] : acc) g.hom[k] = make_set(std::move(v));
  return g;
}

inline std::size_t compose_path(const FinCategory& c, const std::string& src,
                                const std::vector<std::size_t>& mors) {
  std::size_t acc = c.id(src);
  for (auto m : mors) {
    if (c.morphisms[m].src != c.morphisms[acc].tgt)
      throw precondition_error("path breaks at " + c.morphisms[m].label);
    acc = c.then(acc, m);
  }
  return acc;
}

// composable sequences of morphisms, length <= max_len, any start
template <typename F>
void for_each_mor_path(const FinCategory& c, std::size_t max_len, F&& fn) {
  std::vector<std::size_t> seq;
  std::function<bool(const std::string&)> go = [&](const std::string& at) {
    if (!fn(seq, at)) return false;
    if (seq.size() == max_len) return true;
    for (std::size_t m = 0; m < c.morphisms.size(); ++m) {
      if (c.morphisms[m].src != at) continue;
      seq.push_back(m);
      bool keep = go(c.morphisms[m].tgt);
      seq.pop_back();
      if (!keep) return false;
    }
    return true;
  };
  for (const auto& o : c.objects)
    if (!go(o)) return;
}

// the action laws of a path algebra, on a finite category's own data: a
// single morphism acts as itself, and acting on a flattened path of paths
// agrees with acting blockwise first
inline Report validate_cat_algebra(const FinCategory& c,
                                   std::size_t max_len = 3,
                                   std::size_t max_instances = 20000) {
  Report r;
  {
    auto& u = r.add("action-on-letters");
    for (std::size_t m = 0; m < c.morphisms.size(); ++m) {
      ++u.instances;
      try {
        if (compose_path(c, c.morphisms[m].src, {m}) != m)
          u.fail_case(c.morphisms[m].label);
      } catch (const precondition_error& ex) {
        u.fail_case(ex.what());
      }
    }
  }
  {
    auto& a = r.add("action-after-flatten");
    for_each_mor_path(c, max_len, [&](const std::vector<std::size_t>& seq,
                                      const std::string& start) {
      const std::size_t n = seq.size();
      const std::size_t masks = n < 2 ? 1 : std::size_t{1} << (n - 1);
      for (std::size_t mask = 0; mask < masks; ++mask) {
        // blockwise action, with one identity block inserted at each
        // position to exercise empty inner paths as well
        for (std::size_t ins = 0; ins <= n + 1; ++ins) {
          if (a.instances >= max_instances) return false;
          ++a.instances;
          try {
            std::vector<std::size_t> blockwise;
            std::string at = start;
            std::vector<std::size_t> cur;
            std::size_t blocks_done = 0;
            auto emit = [&]() {
              if (ins == blocks_done)
                blockwise.push_back(c.id(at));  // empty inner path
              std::size_t img = compose_path(c, at, cur);
              at = c.morphisms[img].tgt;
              blockwise.push_back(img);
              cur.clear();
              ++blocks_done;
            };
            for (std::size_t p = 0; p < n; ++p) {
              cur.push_back(seq[p]);
              if (p + 1 == n || (mask >> p & 1)) emit();
            }
            if (n == 0 || ins == blocks_done)
              blockwise.push_back(c.id(at));
            std::size_t lhs = compose_path(c, start, seq);
            std::size_t rhs = compose_path(c, start, blockwise);
            if (lhs != rhs)
              a.fail_case(c.morphisms[lhs].label + " vs " +
                          c.morphisms[rhs].label);
          } catch (const precondition_error& ex) {
            a.fail_case(ex.what());
          }
        }
      }
      return true;
    });
  }
  return r;
}

// ---------------------------------------------------------------------------
// Functors between finite categories, and the hom category whose objects
// are functors and whose morphisms are arbitrary component families --
// deliberately with no compatibility condition between components.

struct FinFunctor {
  std::vector<std::size_t> obj;  // target object index per source object
  std::vector<std::size_t> mor;  // target morphism index per source morphism

  friend bool operator==(const FinFunctor& f, const FinFunctor& g) {
    return f.obj == g.obj && f.mor == g.mor;
  }
  friend bool operator<(const FinFunctor& f, const FinFunctor& g) {
    return std::tie(f.obj, f.mor) < std::tie(g.obj, g.mor);
  }
};

inline bool fin_functor_valid(const FinCategory& A, const FinCategory& B,
                              const FinFunctor& F) {
  if (F.obj.size() != A.objects.size() || F.mor.size() != A.morphisms.size())
    return false;
  std::map<std::string, std::size_t> aidx;
  for (std::size_t i = 0; i < A.objects.size(); ++i) aidx[A.objects[i]] = i;
  for (auto o : F.obj)
    if (o >= B.objects.size()) return false;
  for (std::size_t m = 0; m < A.morphisms.size(); ++m) {
    if (F.mor[m] >= B.morphisms.size()) return false;
    const auto& am = A.morphisms[m];
    const auto& bm = B.morphisms[F.mor[m]];
    if (bm.src != B.objects[F.obj[aidx.at(am.src)]]) return false;
    if (bm.tgt != B.objects[F.obj[aidx.at(am.tgt)]]) return false;
  }
  for (const auto& o : A.objects)
    if (F.mor[A.id(o)] != B.id(B.objects[F.obj[aidx.at(o)]])) return false;
  for (const auto& [fg, c] : A.comp)
    if (F.mor[c] != B.then(F.mor[fg.first], F.mor[fg.second])) return false;
  return true;
}

inline std::vector<FinFunctor> enumerate_functors(
    const FinCategory& A, const FinCategory& B, std::size_t cap = 100000,
    const std::vector<std::size_t>* pin_obj = nullptr) {
  std::vector<FinFunctor> out;
  std::map<std::string, std::size_t> aidx;
  for (std::size_t i = 0; i < A.objects.size(); ++i) aidx[A.objects[i]] = i;
  auto try_obj = [&](const std::vector<std::size_t>& omap) {
    // candidate images per morphism; identities are forced
    std::vector<std::vector<std::size_t>> cand(A.morphisms.size());
    for (std::size_t m = 0; m < A.morphisms.size(); ++m) {
      const auto& am = A.morphisms[m];
      if (A.is_identity(m)) {
        cand[m] = {B.id(B.objects[omap[aidx.at(am.src)]])};
      } else {
        cand[m] = B.hom(B.objects[omap[aidx.at(am.src)]],
                        B.objects[omap[aidx.at(am.tgt)]]);
        if (cand[m].empty()) return;
      }
    }
    std::vector<std::size_t> radix;
    std::size_t total = 1;
    for (const auto& l : cand) {
      radix.push_back(l.size());
      guard(total <= cap / std::max<std::size_t>(l.size(), 1),
            "functor enumeration exceeds limit");
      total *= l.size();
    }
    for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
      FinFunctor F;
      F.obj = omap;
      F.mor.resize(A.morphisms.size());
      for (std::size_t m = 0; m < A.morphisms.size(); ++m)
        F.mor[m] = cand[m][pick[m]];
      for (const auto& [fg, comp] : A.comp)
        if (F.mor[comp] != B.then(F.mor[fg.first], F.mor[fg.second]))
          return true;
      guard(out.size() < cap, "functor enumeration exceeds limit");
      out.push_back(std::move(F));
      return true;
    });
  };
  if (pin_obj) {
    try_obj(*pin_obj);
  } else {
    std::vector<std::size_t> radix(A.objects.size(), B.objects.size());
    if (A.objects.empty()) {
      try_obj({});
    } else {
      for_each_tuple(radix, [&](const std::vector<std::size_t>& omap) {
        try_obj(omap);
        return true;
      });
    }
  }
  return out;
}

// functors out of a presentation: object maps plus generator images that
// satisfy every relation exactly, composition folded in the target
struct PresentedFunctor {
  std::map<std::string, std::string> obj;
  std::vector<std::size_t> gen_mor;

  friend bool operator==(const PresentedFunctor& f, const PresentedFunctor& g) {
    return f.obj == g.obj && f.gen_mor == g.gen_mor;
  }
  friend bool operator<(const PresentedFunctor& f, const PresentedFunctor& g) {
    return std::tie(f.obj, f.gen_mor) < std::tie(g.obj, g.gen_mor);
  }
};

inline std::vector<PresentedFunctor> enumerate_functors_from_presentation(
    const PresentedCategory& P, const FinCategory& C,
    std::size_t cap = 100000) {
  P.validate();
  std::vector<PresentedFunctor> out;
  auto eval = [&](const PresentedFunctor& F, const Word& w) {
    std::size_t acc = C.id(F.obj.at(w.src));
    for (auto gi : w.gens) acc = C.then(acc, F.gen_mor[gi]);
    return acc;
  };
  auto try_obj = [&](const std::map<std::string, std::string>& omap) {
    std::vector<std::vector<std::size_t>> cand(P.gens.edges.size());
    for (std::size_t g = 0; g < P.gens.edges.size(); ++g) {
      cand[g] = C.hom(omap.at(P.gens.edges[g].src), omap.at(P.gens.edges[g].tgt));
      if (cand[g].empty()) return;
    }
    std::vector<std::size_t> radix;
    std::size_t total = 1;
    for (const auto& l : cand) {
      radix.push_back(l.size());
      guard(total <= cap / std::max<std::size_t>(l.size(), 1),
            "functor enumeration exceeds limit");
      total *= l.size();
    }
    for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
      PresentedFunctor F;
      F.obj = omap;
      F.gen_mor.resize(cand.size());
      for (std::size_t g = 0; g < cand.size(); ++g) F.gen_mor[g] = cand[g][pick[g]];
      for (const auto& [l, rr] : P.relations)
        if (eval(F, l) != eval(F, rr)) return true;
      guard(out.size() < cap, "functor enumeration exceeds limit");
      out.push_back(std::move(F));
      return true;
    });
  };
  if (P.gens.objects.empty()) {
    try_obj({});
    return out;
  }
  std::vector<std::size_t> radix(P.gens.objects.size(), C.objects.size());
  for_each_tuple(radix, [&](const std::vector<std::size_t>& omap_idx) {
    std::map<std::string, std::string> omap;
    for (std::size_t i = 0; i < P.gens.objects.size(); ++i)
      omap[P.gens.objects[i]] = C.objects[omap_idx[i]];
    try_obj(omap);
    return true;
  });
  return out;
}

namespace detail {

// the category of pointwise families over a fixed object list: objects are
// the given points, hom(i,j) is every choice of one B-morphism per base
// slot, composed slotwise
inline FinCategory family_category(
    const FinCategory& B, const std::vector<std::string>& names,
    const std::vector<std::vector<std::string>>& point_obj, std::size_t cap,
    std::vector<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>>*
        families_out = nullptr) {
  FinCategory H;
  H.objects = names;
  std::vector<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>> fams;
  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>,
           std::size_t>
      idx;
  const std::size_t slots = point_obj.empty() ? 0 : point_obj[0].size();
  for (std::size_t i = 0; i < names.size(); ++i)
    for (std::size_t j = 0; j < names.size(); ++j) {
      std::vector<std::vector<std::size_t>> choice(slots);
      bool possible = true;
      for (std::size_t a = 0; a < slots; ++a) {
        choice[a] = B.hom(point_obj[i][a], point_obj[j][a]);
        if (choice[a].empty()) {
          possible = false;
          break;
        }
      }
      if (!possible) continue;
      std::vector<std::size_t> radix;
      for (const auto& l : choice) radix.push_back(l.size());
      for_each_tuple(radix, [&](const std::vector<std::size_t>& pick) {
        std::vector<std::size_t> fam(slots);
        std::string lbl = names[i] + ">" + names[j] + ":(";
        for (std::size_t a = 0; a < slots; ++a) {
          fam[a] = choice[a][pick[a]];
          if (a) lbl += ",";
          lbl += B.morphisms[fam[a]].label;
        }
        lbl += ")";
        guard(H.morphisms.size() < cap, "family category exceeds limit");
        idx[{i, j, fam}] = H.morphisms.size();
        fams.push_back({i, j, fam});
        H.morphisms.push_back({lbl, names[i], names[j]});
        return true;
      });
    }
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::vector<std::size_t> fam(slots);
    for (std::size_t a = 0; a < slots; ++a)
      fam[a] = B.id(point_obj[i][a]);
    H.identities[names[i]] = idx.at({i, i, fam});
  }
  for (std::size_t m1 = 0; m1 < fams.size(); ++m1)
    for (std::size_t m2 = 0; m2 < fams.size(); ++m2) {
      const auto& [i1, j1, f1] = fams[m1];
      const auto& [i2, j2, f2] = fams[m2];
      if (j1 != i2) continue;
      std::vector<std::size_t> fam(slots);
      for (std::size_t a = 0; a < slots; ++a) fam[a] = B.then(f1[a], f2[a]);
      H.comp[{m1, m2}] = idx.at({i1, j2, fam});
    }
  if (families_out) *families_out = std::move(fams);
  return H;
}

}  // namespace detail

struct CatHom {
  FinCategory cat;
  std::vector<FinFunctor> points;
  // per morphism: source point, target point, one B-morphism per A-object
  std::vector<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>>
      families;
};

// the hom of two finite categories: functors, with arbitrary component
// families between them
inline CatHom cat_hom_algebra(const FinCategory& A, const FinCategory& B,
                              std::size_t cap = 100000) {
  CatHom H;
  H.points = enumerate_functors(A, B, cap);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> point_obj;
  for (std::size_t i = 0; i < H.points.size(); ++i) {
    names.push_back("F" + std::to_string(i));
    std::vector<std::string> po;
    for (auto o : H.points[i].obj) po.push_back(B.objects[o]);
    point_obj.push_back(std::move(po));
  }
  H.cat = detail::family_category(B, names, point_obj, cap, &H.families);
  return H;
}

struct PointwiseCat {
  FinCategory cat;
  std::vector<VMor<FinSetBase>> points;
  std::vector<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>>
      families;
};

// the pointwise structure on graph morphisms X -> (carrier of Y): same
// family categories, but the points need not respect composition
inline PointwiseCat pointwise_path_algebra(const SetVGraph& X,
                                           const FinCategory& Y,
                                           std::size_t cap = 100000) {
  PointwiseCat P;
  P.points = enumerate_vmors(X, carrier_graph(Y), cap);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> point_obj;
  for (std::size_t i = 0; i < P.points.size(); ++i) {
    names.push_back("f" + std::to_string(i));
    std::vector<std::string> po;
    for (const auto& x : X.objects) po.push_back(P.points[i].obj.at(x));
    point_obj.push_back(std::move(po));
  }
  P.cat = detail::family_category(Y, names, point_obj, cap, &P.families);
  return P;
}

// does a graph morphism between carrier graphs preserve identities and
// binary composition?  exact: longer paths follow from these
inline bool vmor_functorial(const FinCategory& A, const FinCategory& B,
                            const VMor<FinSetBase>& f) {
  auto image = [&](std::size_t m) {
    const auto& am = A.morphisms[m];
    const auto& part = f.homs.at({am.src, am.tgt});
    return B.mor_index(part(Elem::atom(am.label)).name());
  };
  for (const auto& o : A.objects)
    if (image(A.id(o)) != B.id(f.obj.at(o))) return false;
  for (const auto& [fg, c] : A.comp)
    if (image(c) != B.then(image(fg.first), image(fg.second))) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Multimaps between finite categories, phrased on carrier graphs.  Being an
// algebra map in one slot is slicewise functoriality; the jointly-stated
// path law below is equivalent, and the tests check both independently.

using CatMultimap = VMultimap<FinSetBase>;

// every multimap of carrier graphs: object assignments plus one function
// per linear part
inline std::vector<CatMultimap> enumerate_graph_multimaps(
    const std::vector<SetVGraph>& As, const SetVGraph& C,
    std::size_t cap = 100000) {
  std::vector<CatMultimap> out;
  std::vector<std::size_t> radix;
  for (const auto& a : As) radix.push_back(a.objects.size());
  std::vector<std::vector<std::string>> tuples;
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> t(As.size());
    for (std::size_t j = 0; j < As.size(); ++j) t[j] = As[j].objects[idx[j]];
    tuples.push_back(std::move(t));
    return true;
  });
  std::vector<std::size_t> oradix(tuples.size(), C.objects.size());
  for_each_tuple(oradix, [&](const std::vector<std::size_t>& opick) {
    std::map<std::vector<std::string>, std::string> omap;
    for (std::size_t k = 0; k < tuples.size(); ++k)
      omap[tuples[k]] = C.objects[opick[k]];
    // canonical part keys with their choice lists
    std::vector<PartKey> keys;
    std::vector<std::vector<SetMor>> choices;
    bool possible = true;
    for (std::size_t var = 0; var < As.size() && possible; ++var) {
      std::vector<std::size_t> oradix2;
      std::vector<std::size_t> owner;
      for (std::size_t k = 0; k < As.size(); ++k)
        if (k != var) {
          oradix2.push_back(As[k].objects.size());
          owner.push_back(k);
        }
      auto run = [&](const std::vector<std::size_t>& others_idx) {
        std::vector<std::string> t(As.size());
        for (std::size_t k = 0; k < owner.size(); ++k)
          t[owner[k]] = As[owner[k]].objects[others_idx[k]];
        for (const auto& a : As[var].objects) {
          for (const auto& b : As[var].objects) {
            std::vector<std::string> ta = t, tb = t;
            ta[var] = a;
            tb[var] = b;
            auto cand = FinSetBase::hom_set(As[var].at(a, b),
                                            C.at(omap.at(ta), omap.at(tb)));
            if (cand.empty()) {
              possible = false;
              return false;
            }
            std::vector<std::string> key = t;
            key[var] = "";
            keys.push_back({var, key, a, b});
            choices.push_back(std::move(cand));
          }
        }
        return true;
      };
      if (oradix2.empty()) {
        run({});
      } else {
        for_each_tuple(oradix2, [&](const std::vector<std::size_t>& oi) {
          return run(oi);
        });
      }
    }
    if (!possible) return true;
    std::vector<std::size_t> cradix;
    for (const auto& l : choices) cradix.push_back(l.size());
    for_each_tuple(cradix, [&](const std::vector<std::size_t>& pick) {
      CatMultimap f;
      f.sources = As;
      f.target = C;
      f.obj = omap;
      for (std::size_t k = 0; k < keys.size(); ++k)
        f.parts[keys[k]] = choices[k][pick[k]];
      guard(out.size() < cap, "multimap enumeration exceeds limit");
      out.push_back(std::move(f));
      return true;
    });
    return true;
  });
  return out;
}

// slicewise: with every other input frozen, the part functions form a
// functor in the chosen variable
inline bool is_functorial_in_variable(const std::vector<FinCategory>& As,
                                      const FinCategory& C,
                                      const CatMultimap& f, std::size_t var) {
  auto image = [&](const std::vector<std::string>& t, std::size_t m) {
    const auto& am = As[var].morphisms[m];
    std::vector<std::string> ta = t;
    ta[var] = am.src;
    const auto& part = f.part(var, ta, am.src, am.tgt);
    return C.mor_index(part(Elem::atom(am.label)).name());
  };
  auto obj_at = [&](std::vector<std::string> t, const std::string& a) {
    t[var] = a;
    return f.apply_obj(t);
  };
  std::vector<std::size_t> radix;
  std::vector<std::size_t> owner;
  for (std::size_t k = 0; k < As.size(); ++k)
    if (k != var) {
      radix.push_back(As[k].objects.size());
      owner.push_back(k);
    }
  bool ok = true;
  auto run = [&](const std::vector<std::size_t>& others_idx) {
    std::vector<std::string> t(As.size());
    for (std::size_t k = 0; k < owner.size(); ++k)
      t[owner[k]] = As[owner[k]].objects[others_idx[k]];
    for (const auto& a : As[var].objects)
      if (image(t, As[var].id(a)) != C.id(obj_at(t, a))) {
        ok = false;
        return false;
      }
    for (const auto& [fg, comp] : As[var].comp)
      if (image(t, comp) != C.then(image(t, fg.first), image(t, fg.second))) {
        ok = false;
        return false;
      }
    return true;
  };
  if (radix.empty()) {
    run({});
  } else {
    for_each_tuple(radix, [&](const std::vector<std::size_t>& oi) {
      return run(oi);
    });
  }
  return ok;
}

// jointly: for every slot, frozen tuple, and composable sequence of source
// morphisms up to max_len (the empty sequence included), the image of the
// composite is the composite of the images
inline bool is_multi_functorial(const std::vector<FinCategory>& As,
                                const FinCategory& C, const CatMultimap& f,
                                std::size_t max_len = 3) {
  auto image = [&](std::size_t var, const std::vector<std::string>& t,
                   std::size_t m) {
    const auto& am = As[var].morphisms[m];
    std::vector<std::string> ta = t;
    ta[var] = am.src;
    const auto& part = f.part(var, ta, am.src, am.tgt);
    return C.mor_index(part(Elem::atom(am.label)).name());
  };
  for (std::size_t var = 0; var < As.size(); ++var) {
    std::vector<std::size_t> radix;
    std::vector<std::size_t> owner;
    for (std::size_t k = 0; k < As.size(); ++k)
      if (k != var) {
        radix.push_back(As[k].objects.size());
        owner.push_back(k);
      }
    bool ok = true;
    auto run = [&](const std::vector<std::size_t>& others_idx) {
      std::vector<std::string> t(As.size());
      for (std::size_t k = 0; k < owner.size(); ++k)
        t[owner[k]] = As[owner[k]].objects[others_idx[k]];
      for_each_mor_path(As[var], max_len, [&](const std::vector<std::size_t>& seq,
                                              const std::string& start) {
        std::size_t src_comp = compose_path(As[var], start, seq);
        std::vector<std::string> ts = t;
        ts[var] = start;
        std::vector<std::size_t> imgs;
        for (auto m : seq) imgs.push_back(image(var, t, m));
        std::size_t lhs = compose_path(C, f.apply_obj(ts), imgs);
        std::size_t rhs = image(var, t, src_comp);
        if (lhs != rhs) {
          ok = false;
          return false;
        }
        return true;
      });
      return ok;
    };
    if (radix.empty()) {
      run({});
    } else {
      for_each_tuple(radix, [&](const std::vector<std::size_t>& oi) {
        return run(oi);
      });
    }
    if (!ok) return false;
  }
  return true;
}

inline std::vector<CatMultimap> enumerate_em_multimaps(
    const std::vector<FinCategory>& As, const FinCategory& C,
    std::size_t cap = 100000) {
  std::vector<SetVGraph> gs;
  for (const auto& a : As) gs.push_back(carrier_graph(a));
  std::vector<CatMultimap> out;
  for (auto& f : enumerate_graph_multimaps(gs, carrier_graph(C), cap)) {
    bool keep = true;
    for (std::size_t var = 0; var < As.size() && keep; ++var)
      keep = is_functorial_in_variable(As, C, f, var);
    if (keep) out.push_back(std::move(f));
  }
  return out;
}

template <typename B>
VMultimap<B> swap_multimap_inputs(const VMultimap<B>& f, std::size_t k) {
  if (k + 1 >= f.arity()) throw precondition_error("swap slot out of range");
  VMultimap<B> g;
  g.sources = f.sources;
  std::swap(g.sources[k], g.sources[k + 1]);
  g.target = f.target;
  auto sw = [&](std::vector<std::string> t) {
    std::swap(t[k], t[k + 1]);
    return t;
  };
  for (const auto& [t, o] : f.obj) g.obj[sw(t)] = o;
  for (const auto& [key, m] : f.parts) {
    auto [var, others, a, b] = key;
    std::size_t var2 = var == k ? k + 1 : var == k + 1 ? k : var;
    g.parts[{var2, sw(others), a, b}] = m;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Finite categories, with separately-functorial multimaps between their
// carriers, as a symmetric multicategory.  Multimaps are encoded as the
// tuple of their object assignments followed by their part value tables,
// both in a canonical order derived from the source object lists.

inline Multicat path_em_multicat(
    const std::vector<std::pair<std::string, FinCategory>>& algs,
    std::size_t max_hom = 100000, std::size_t cap = 100000) {
  auto cats = std::make_shared<std::map<std::string, FinCategory>>();
  auto graphs = std::make_shared<std::map<std::string, SetVGraph>>();
  for (const auto& [n, c] : algs) {
    if (!cats->emplace(n, c).second)
      throw precondition_error("duplicate algebra name " + n);
    graphs->emplace(n, carrier_graph(c));
  }

  // canonical orders shared by encode and decode
  auto tuples_of = [](const std::vector<SetVGraph>& As) {
    std::vector<std::size_t> radix;
    for (const auto& a : As) radix.push_back(a.objects.size());
    std::vector<std::vector<std::string>> out;
    for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
      std::vector<std::string> t(As.size());
      for (std::size_t j = 0; j < As.size(); ++j) t[j] = As[j].objects[idx[j]];
      out.push_back(std::move(t));
      return true;
    });
    return out;
  };
  auto keys_of = [](const std::vector<SetVGraph>& As) {
    std::vector<PartKey> keys;
    for (std::size_t var = 0; var < As.size(); ++var) {
      std::vector<std::size_t> radix;
      std::vector<std::size_t> owner;
      for (std::size_t k = 0; k < As.size(); ++k)
        if (k != var) {
          radix.push_back(As[k].objects.size());
          owner.push_back(k);
        }
      auto run = [&](const std::vector<std::size_t>& oi) {
        std::vector<std::string> t(As.size());
        for (std::size_t k = 0; k < owner.size(); ++k)
          t[owner[k]] = As[owner[k]].objects[oi[k]];
        t[var] = "";
        for (const auto& a : As[var].objects)
          for (const auto& b : As[var].objects) keys.push_back({var, t, a, b});
        return true;
      };
      if (radix.empty()) {
        run({});
      } else {
        for_each_tuple(radix, run);
      }
    }
    return keys;
  };
  auto encode = [tuples_of, keys_of](const CatMultimap& f) {
    std::vector<Elem> obj_part;
    for (const auto& t : tuples_of(f.sources))
      obj_part.push_back(Elem::atom(f.apply_obj(t)));
    std::vector<Elem> part_part;
    for (const auto& key : keys_of(f.sources))
      part_part.push_back(encode_fun(f.parts.at(key)));
    return Elem::tuple(
        {Elem::tuple(std::move(obj_part)), Elem::tuple(std::move(part_part))});
  };
  auto decode = [tuples_of, keys_of](const std::vector<SetVGraph>& As,
                                     const SetVGraph& C, const Elem& v) {
    CatMultimap f;
    f.sources = As;
    f.target = C;
    const auto& obj_part = v.items()[0].items();
    auto tuples = tuples_of(As);
    for (std::size_t k = 0; k < tuples.size(); ++k)
      f.obj[tuples[k]] = obj_part[k].name();
    const auto& part_part = v.items()[1].items();
    auto keys = keys_of(As);
    for (std::size_t k = 0; k < keys.size(); ++k) {
      const auto& [var, others, a, b] = keys[k];
      std::vector<std::string> ta = others, tb = others;
      ta[var] = a;
      tb[var] = b;
      f.parts[keys[k]] = decode_fun(As[var].at(a, b),
                                    C.at(f.obj.at(ta), f.obj.at(tb)),
                                    part_part[k]);
    }
    return f;
  };

  Multicat M;
  M.name = "path-algebras";
  for (const auto& [n, c] : algs) M.objects.push_back(n);
  M.max_hom = max_hom;
  M.hom_fn = [cats, graphs, encode, cap](const std::vector<std::string>& src,
                                         const std::string& tgt) {
    std::vector<FinCategory> As;
    for (const auto& s : src) As.push_back(cats->at(s));
    std::vector<Elem> out;
    for (const auto& f : enumerate_em_multimaps(As, cats->at(tgt), cap))
      out.push_back(encode(f));
    return out;
  };
  M.unit_fn = [graphs, encode](const std::string& x) {
    const SetVGraph& g = graphs->at(x);
    return encode(multimap_of_vmor(g, g, identity_vmor(g)));
  };
  M.compose_fn = [graphs, encode, decode](const TypedMultimap& g,
                                          const std::vector<TypedMultimap>& fs) {
    auto carriers = [&](const std::vector<std::string>& names) {
      std::vector<SetVGraph> out;
      for (const auto& n : names) out.push_back(graphs->at(n));
      return out;
    };
    CatMultimap gd = decode(carriers(g.src), graphs->at(g.tgt), g.val);
    std::vector<CatMultimap> fds;
    for (const auto& f : fs)
      fds.push_back(decode(carriers(f.src), graphs->at(f.tgt), f.val));
    return encode(compose_multimap(gd, fds));
  };
  M.swap_fn = [graphs, encode, decode](const TypedMultimap& f, std::size_t k) {
    std::vector<SetVGraph> As;
    for (const auto& s : f.src) As.push_back(graphs->at(s));
    CatMultimap fd = decode(As, graphs->at(f.tgt), f.val);
    return encode(swap_multimap_inputs(fd, k));
  };
  return M;
}

// ---------------------------------------------------------------------------
// The tensor of finite categories, presented on factor tuples: one
// generator per factor morphism per tuple, with factorwise composition and
// unit relations.  The congruence closure runs at a stated bound, and a
// separate whole-word closure (no rewriting under contexts) certifies per
// instance whether quotienting commutes with taking underlying data.

struct PathTensor {
  PresentedCategory presentation;  // identity on objects: factor tuples
  std::size_t bound = 0;
  std::optional<WordEquality> classes;
  bool exhausted = false;  // some closure rewrite left the bounded universe
  std::optional<bool> underlying_preserved;
  std::map<std::tuple<std::size_t, std::vector<std::string>, std::size_t>,
           std::uint32_t>
      gen;
  std::vector<FinCategory> factors;

  // the universal multimap on one morphism, others held fixed
  Word embed(std::size_t var, const std::vector<std::string>& at,
             std::size_t m) const {
    std::vector<std::string> src = at, tgt = at;
    src[var] = factors[var].morphisms[m].src;
    tgt[var] = factors[var].morphisms[m].tgt;
    return Word{tuple_name(src), tuple_name(tgt), {gen.at({var, src, m})}};
  }
};

inline PathTensor tensor_path_algebras(std::vector<FinCategory> factor_list,
                                       WordEqualityBound bound = {},
                                       std::size_t preserve_cap = 2000) {
  PathTensor t;
  t.factors = std::move(factor_list);
  t.bound = bound.max_word_length;
  const std::size_t n = t.factors.size();

  std::vector<std::size_t> radix;
  for (const auto& f : t.factors) radix.push_back(f.objects.size());
  std::vector<std::vector<std::string>> tuples;
  std::map<std::vector<std::string>, std::size_t> tuple_idx;
  for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
    std::vector<std::string> tu(n);
    for (std::size_t j = 0; j < n; ++j) tu[j] = t.factors[j].objects[idx[j]];
    tuple_idx[tu] = tuples.size();
    tuples.push_back(std::move(tu));
    return true;
  });
  for (const auto& tu : tuples)
    t.presentation.gens.objects.push_back(tuple_name(tu));

  // generators: every factor morphism (identities included) at every tuple
  struct GInfo {
    std::size_t var, mor, src_tuple, tgt_tuple;
  };
  std::vector<GInfo> info;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::uint32_t>
      gidx;  // (var, src tuple, mor)
  for (std::size_t ti = 0; ti < tuples.size(); ++ti)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t m = 0; m < t.factors[j].morphisms.size(); ++m) {
        const auto& fm = t.factors[j].morphisms[m];
        if (fm.src != tuples[ti][j]) continue;
        std::vector<std::string> tgt = tuples[ti];
        tgt[j] = fm.tgt;
        auto g = static_cast<std::uint32_t>(t.presentation.gens.edges.size());
        t.gen[{j, tuples[ti], m}] = g;
        gidx[{j, ti, m}] = g;
        info.push_back({j, m, ti, tuple_idx.at(tgt)});
        t.presentation.gens.edges.push_back(
            {"[" + std::to_string(j) + ":" + fm.label + "@" +
                 tuple_name(tuples[ti]) + "]",
             tuple_name(tuples[ti]), tuple_name(tgt)});
      }

  // relations: units collapse, and consecutive letters in one factor
  // compose; longer chains and cross-factor contexts follow under the
  // congruence, which rewrites inside arbitrary words
  for (std::size_t ti = 0; ti < tuples.size(); ++ti)
    for (std::size_t j = 0; j < n; ++j) {
      std::size_t idm = t.factors[j].id(tuples[ti][j]);
      t.presentation.relations.push_back(
          {Word{tuple_name(tuples[ti]), tuple_name(tuples[ti]),
                {gidx.at({j, ti, idm})}},
           empty_word(tuple_name(tuples[ti]))});
      for (std::size_t m1 = 0; m1 < t.factors[j].morphisms.size(); ++m1) {
        if (t.factors[j].morphisms[m1].src != tuples[ti][j]) continue;
        std::uint32_t g1 = gidx.at({j, ti, m1});
        std::size_t mid = info[g1].tgt_tuple;
        for (std::size_t m2 = 0; m2 < t.factors[j].morphisms.size(); ++m2) {
          if (t.factors[j].morphisms[m2].src != t.factors[j].morphisms[m1].tgt)
            continue;
          std::uint32_t g2 = gidx.at({j, mid, m2});
          std::uint32_t gc = gidx.at({j, ti, t.factors[j].then(m1, m2)});
          std::string a = tuple_name(tuples[ti]);
          std::string b = t.presentation.gens.edges[g2].tgt;
          t.presentation.relations.push_back(
              {Word{a, b, {g1, g2}}, Word{a, b, {gc}}});
        }
      }
    }

  t.classes.emplace(t.presentation, bound);
  t.exhausted = t.classes->closure_overflowed();

  // certify underlying-data preservation: close the same word universe
  // under whole-word block composition and unit insertion only, and compare
  // the two partitions
  {
    struct BWord {
      std::size_t start, end;  // tuple indices
      std::vector<std::uint32_t> gens;
    };
    std::vector<BWord> words;
    std::map<std::pair<std::size_t, std::vector<std::uint32_t>>, std::size_t>
        windex;
    bool capped = false;
    for (std::size_t ti = 0; ti < tuples.size() && !capped; ++ti) {
      std::vector<BWord> layer = {{ti, ti, {}}};
      while (!layer.empty()) {
        std::vector<BWord> next;
        for (const auto& w : layer) {
          if (words.size() >= preserve_cap) {
            capped = true;
            break;
          }
          windex[{w.start, w.gens}] = words.size();
          words.push_back(w);
          if (w.gens.size() == t.bound) continue;
          for (std::size_t g = 0; g < info.size(); ++g)
            if (info[g].src_tuple == w.end) {
              BWord w2 = w;
              w2.gens.push_back(static_cast<std::uint32_t>(g));
              w2.end = info[g].tgt_tuple;
              next.push_back(std::move(w2));
            }
        }
        if (capped) break;
        layer = std::move(next);
      }
    }
    if (capped) {
      t.underlying_preserved = std::nullopt;
    } else {
      detail::UnionFind uf(words.size());
      auto tuple_at = [&](const BWord& w, std::size_t pos) {
        std::size_t ti = w.start;
        for (std::size_t q = 0; q < pos; ++q) ti = info[w.gens[q]].tgt_tuple;
        return ti;
      };
      for (std::size_t wi = 0; wi < words.size(); ++wi) {
        const auto& w = words[wi];
        const std::size_t len = w.gens.size();
        // block compositions
        const std::size_t masks = len < 2 ? 0 : std::size_t{1} << (len - 1);
        for (std::size_t mask = 0; mask < masks; ++mask) {
          std::vector<std::uint32_t> reduced;
          bool valid = true;
          std::size_t p = 0;
          while (p < len && valid) {
            std::size_t q = p;
            while (q + 1 < len && !(mask >> q & 1)) ++q;
            std::size_t var = info[w.gens[p]].var;
            std::size_t acc = info[w.gens[p]].mor;
            for (std::size_t r2 = p + 1; r2 <= q; ++r2) {
              if (info[w.gens[r2]].var != var) {
                valid = false;
                break;
              }
              acc = t.factors[var].then(acc, info[w.gens[r2]].mor);
            }
            if (valid)
              reduced.push_back(gidx.at({var, tuple_at(w, p), acc}));
            p = q + 1;
          }
          if (!valid) continue;
          auto it = windex.find({w.start, reduced});
          if (it != windex.end()) uf.unite(wi, it->second);
        }
        // unit insertions
        if (len < t.bound)
          for (std::size_t pos = 0; pos <= len; ++pos) {
            std::size_t ti = tuple_at(w, pos);
            for (std::size_t j = 0; j < n; ++j) {
              std::uint32_t idg =
                  gidx.at({j, ti, t.factors[j].id(tuples[ti][j])});
              std::vector<std::uint32_t> w2 = w.gens;
              w2.insert(w2.begin() + static_cast<std::ptrdiff_t>(pos), idg);
              uf.unite(wi, windex.at({w.start, w2}));
            }
          }
      }
      // compare partitions per endpoint pair
      std::map<std::pair<std::size_t, std::size_t>, std::vector<std::size_t>>
          by_ends;
      for (std::size_t wi = 0; wi < words.size(); ++wi)
        by_ends[{words[wi].start, words[wi].end}].push_back(wi);
      auto as_word = [&](const BWord& w) {
        return Word{t.presentation.gens.objects[w.start],
                    t.presentation.gens.objects[w.end], w.gens};
      };
      bool agree = true;
      for (const auto& [ends, group] : by_ends) {
        for (std::size_t x = 0; x < group.size() && agree; ++x)
          for (std::size_t y = x + 1; y < group.size() && agree; ++y) {
            bool blockwise = uf.find(group[x]) == uf.find(group[y]);
            bool congruence = t.classes->equal(as_word(words[group[x]]),
                                               as_word(words[group[y]]));
            if (blockwise != congruence) agree = false;
          }
        if (!agree) break;
      }
      t.underlying_preserved = agree;
    }
  }
  return t;
}

// when every factor is a free path image, the tensor is free again: the
// path structure on the free product of the bases, no quotient needed
inline PathAlgebra tensor_free_paths(const std::vector<SetVGraph>& xs) {
  return path_algebra(free_product_graphs(xs).graph);
}

}  // namespace freeprod
