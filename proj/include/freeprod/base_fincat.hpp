#pragma once

// The finite-category instance of the Base interface: hom objects of an
// enriched graph are finite categories (one enrichment level above FinSet),
// morphisms between them are functors given by name tables.  Products and
// coproducts are the pointwise/disjoint-union categories; hom_set enumerates
// functors by brute force, so keep the instances small.

#include <map>
#include <string>
#include <vector>

#include "core.hpp"
#include "fincat.hpp"
#include "vgraph.hpp"

namespace freeprod {

// A functor as tables keyed by object and morphism names.
struct CatFunctorTable {
  FinCategory dom, cod;
  std::map<std::string, std::string> obj;
  std::map<std::string, std::string> mor;  // keyed by morphism label

  friend bool operator==(const CatFunctorTable& a, const CatFunctorTable& b) {
    return a.obj == b.obj && a.mor == b.mor && a.dom == b.dom && a.cod == b.cod;
  }
  friend bool operator<(const CatFunctorTable& a, const CatFunctorTable& b) {
    if (!(a.obj == b.obj)) return a.obj < b.obj;
    if (!(a.mor == b.mor)) return a.mor < b.mor;
    if (!(a.dom == b.dom)) return a.dom < b.dom;
    return a.cod < b.cod;
  }
};

inline bool functor_table_valid(const CatFunctorTable& F) {
  for (auto& o : F.dom.objects)
    if (!F.obj.count(o) || !F.cod.has_object(F.obj.at(o))) return false;
  std::vector<std::size_t> image(F.dom.morphisms.size());
  for (std::size_t i = 0; i < F.dom.morphisms.size(); ++i) {
    auto& m = F.dom.morphisms[i];
    auto it = F.mor.find(m.label);
    if (it == F.mor.end()) return false;
    std::size_t j;
    try {
      j = F.cod.mor_index(it->second);
    } catch (const precondition_error&) {
      return false;
    }
    if (F.cod.morphisms[j].src != F.obj.at(m.src) || F.cod.morphisms[j].tgt != F.obj.at(m.tgt))
      return false;
    image[i] = j;
  }
  for (auto& o : F.dom.objects)
    if (image[F.dom.id(o)] != F.cod.id(F.obj.at(o))) return false;
  for (auto& [fg, h] : F.dom.comp)
    if (F.cod.then(image[fg.first], image[fg.second]) != image[h]) return false;
  return true;
}

struct FinCatBase {
  using Obj = FinCategory;
  using Mor = CatFunctorTable;

  static Obj initial() { return FinCategory{}; }
  static Obj terminal() { return terminal_category(); }
  static bool is_initial(const Obj& x) { return x.objects.empty(); }

  static Obj product(const std::vector<Obj>& xs) { return product_category(xs); }

  static Mor projection(const std::vector<Obj>& xs, std::size_t j) {
    Mor F;
    F.dom = product_category(xs);
    F.cod = xs[j];
    // re-run the product's tuple odometers to recover component names
    std::vector<std::size_t> obj_radix, mor_radix;
    for (auto& c : xs) {
      obj_radix.push_back(c.objects.size());
      mor_radix.push_back(c.morphisms.size());
    }
    std::size_t at = 0;
    for_each_tuple(obj_radix, [&](const std::vector<std::size_t>& idx) {
      F.obj[F.dom.objects[at++]] = xs[j].objects[idx[j]];
      return true;
    });
    at = 0;
    for_each_tuple(mor_radix, [&](const std::vector<std::size_t>& idx) {
      F.mor[F.dom.morphisms[at++].label] = xs[j].morphisms[idx[j]].label;
      return true;
    });
    return F;
  }

  static Mor tupling(const std::vector<Mor>& fs) {
    if (fs.empty()) throw precondition_error("tupling needs at least one map");
    std::vector<Obj> cods;
    for (auto& f : fs) cods.push_back(f.cod);
    Mor F;
    F.dom = fs.front().dom;
    F.cod = product_category(cods);
    auto tup = [&](const std::vector<std::string>& parts) {
      std::string s = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += ",";
        s += parts[i];
      }
      return s + ")";
    };
    for (auto& o : F.dom.objects) {
      std::vector<std::string> parts;
      for (auto& f : fs) parts.push_back(f.obj.at(o));
      F.obj[o] = tup(parts);
    }
    for (auto& m : F.dom.morphisms) {
      std::vector<std::string> parts;
      for (auto& f : fs) parts.push_back(f.mor.at(m.label));
      F.mor[m.label] = tup(parts);
    }
    return F;
  }

  static Obj coproduct(const std::vector<Obj>& xs) {
    Obj out;
    auto tag = [](std::size_t j, const std::string& s) {
      return "#" + std::to_string(j) + ":" + s;
    };
    std::vector<std::size_t> offset;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      offset.push_back(out.morphisms.size());
      for (auto& o : xs[j].objects) out.objects.push_back(tag(j, o));
      for (auto& m : xs[j].morphisms)
        out.morphisms.push_back({tag(j, m.label), tag(j, m.src), tag(j, m.tgt)});
      for (auto& [fg, h] : xs[j].comp)
        out.comp[{offset[j] + fg.first, offset[j] + fg.second}] = offset[j] + h;
      for (auto& [o, i] : xs[j].identities) out.identities[tag(j, o)] = offset[j] + i;
    }
    return out;
  }

  static Mor injection(const std::vector<Obj>& xs, std::size_t j) {
    Mor F;
    F.dom = xs[j];
    F.cod = coproduct(xs);
    auto tag = [&](const std::string& s) { return "#" + std::to_string(j) + ":" + s; };
    for (auto& o : xs[j].objects) F.obj[o] = tag(o);
    for (auto& m : xs[j].morphisms) F.mor[m.label] = tag(m.label);
    return F;
  }

  static Mor cotupling(const std::vector<Mor>& fs) {
    if (fs.empty()) throw precondition_error("cotupling needs at least one map");
    std::vector<Obj> doms;
    for (auto& f : fs) doms.push_back(f.dom);
    Mor F;
    F.dom = coproduct(doms);
    F.cod = fs.front().cod;
    for (std::size_t j = 0; j < fs.size(); ++j) {
      auto tag = [&](const std::string& s) { return "#" + std::to_string(j) + ":" + s; };
      for (auto& [o, img] : fs[j].obj) F.obj[tag(o)] = img;
      for (auto& [m, img] : fs[j].mor) F.mor[tag(m)] = img;
    }
    return F;
  }

  static Mor identity(const Obj& x) {
    Mor F;
    F.dom = F.cod = x;
    for (auto& o : x.objects) F.obj[o] = o;
    for (auto& m : x.morphisms) F.mor[m.label] = m.label;
    return F;
  }

  static Mor compose(const Mor& g, const Mor& f) {
    Mor F;
    F.dom = f.dom;
    F.cod = g.cod;
    for (auto& [o, img] : f.obj) F.obj[o] = g.obj.at(img);
    for (auto& [m, img] : f.mor) F.mor[m] = g.mor.at(img);
    return F;
  }

  static bool mor_eq(const Mor& f, const Mor& g) { return f == g; }

  // All functors a -> b: choose images of objects, then of non-identity
  // morphisms (identities are forced), then keep the choices preserving
  // composition.
  static std::vector<Mor> hom_set(const Obj& a, const Obj& b, std::size_t cap = 100000) {
    std::vector<Mor> out;
    if (a.objects.empty()) {
      Mor F;
      F.dom = a;
      F.cod = b;
      out.push_back(std::move(F));
      return out;
    }
    std::vector<std::size_t> obj_radix(a.objects.size(), b.objects.size());
    for_each_tuple(obj_radix, [&](const std::vector<std::size_t>& oidx) {
      std::map<std::string, std::string> omap;
      for (std::size_t i = 0; i < a.objects.size(); ++i) omap[a.objects[i]] = b.objects[oidx[i]];
      // candidate image indices per morphism
      std::vector<std::vector<std::size_t>> cand(a.morphisms.size());
      bool possible = true;
      for (std::size_t i = 0; i < a.morphisms.size() && possible; ++i) {
        if (a.is_identity(i)) {
          cand[i] = {b.id(omap.at(a.morphisms[i].src))};
          continue;
        }
        cand[i] = b.hom(omap.at(a.morphisms[i].src), omap.at(a.morphisms[i].tgt));
        if (cand[i].empty()) possible = false;
      }
      if (!possible) return true;
      std::vector<std::size_t> radix;
      for (auto& c : cand) radix.push_back(c.size());
      for_each_tuple(radix, [&](const std::vector<std::size_t>& midx) {
        std::vector<std::size_t> image(a.morphisms.size());
        for (std::size_t i = 0; i < a.morphisms.size(); ++i) image[i] = cand[i][midx[i]];
        for (auto& [fg, h] : a.comp)
          if (b.then(image[fg.first], image[fg.second]) != image[h]) return true;
        Mor F;
        F.dom = a;
        F.cod = b;
        F.obj = omap;
        for (std::size_t i = 0; i < a.morphisms.size(); ++i)
          F.mor[a.morphisms[i].label] = b.morphisms[image[i]].label;
        guard(out.size() < cap, "functor enumeration exceeds limit");
        out.push_back(std::move(F));
        return true;
      });
      return true;
    });
    std::sort(out.begin(), out.end());
    return out;
  }
};

template <>
inline FinCatBase::Mor make_terminal_mor<FinCatBase>(const FinCategory& dom) {
  CatFunctorTable F;
  F.dom = dom;
  F.cod = terminal_category();
  for (auto& o : dom.objects) F.obj[o] = "*";
  for (auto& m : dom.morphisms) F.mor[m.label] = "id(*)";
  return F;
}

template <>
inline FinCatBase::Mor initial_mor<FinCatBase>(const FinCategory& cod) {
  CatFunctorTable F;
  F.cod = cod;
  return F;
}

using CatVGraph = VGraph<FinCatBase>;

// ---------------------------------------------------------------------------
// The internal hom matching the one-moving-coordinate tensor on categories:
// objects are functors B -> C, morphisms are *transformations* — one
// C-morphism per object of B with no naturality requirement — composed
// pointwise.

struct FunnyHom {
  FinCategory cat;                                 // the hom category itself
  std::vector<CatFunctorTable> points;             // aligned with cat.objects
  std::vector<std::string> base_objects;           // component order
  std::vector<std::vector<std::size_t>> components;  // per morphism, per base object
};

inline FunnyHom funny_hom_category(const FinCategory& B, const FinCategory& C,
                                   std::size_t cap = 100000) {
  FunnyHom H;
  H.points = FinCatBase::hom_set(B, C, cap);
  H.base_objects = B.objects;
  for (std::size_t i = 0; i < H.points.size(); ++i)
    H.cat.objects.push_back("F" + std::to_string(i));

  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>, std::size_t> lookup;
  for (std::size_t u = 0; u < H.points.size(); ++u) {
    for (std::size_t v = 0; v < H.points.size(); ++v) {
      std::vector<std::vector<std::size_t>> choices;
      bool possible = true;
      for (auto& b : B.objects) {
        auto cand = C.hom(H.points[u].obj.at(b), H.points[v].obj.at(b));
        if (cand.empty()) {
          possible = false;
          break;
        }
        choices.push_back(std::move(cand));
      }
      if (!possible) continue;
      std::vector<std::size_t> radix;
      for (auto& c : choices) radix.push_back(c.size());
      std::size_t k = 0;
      for_each_tuple(radix, [&](const std::vector<std::size_t>& idx) {
        std::vector<std::size_t> comps;
        comps.reserve(choices.size());
        for (std::size_t j = 0; j < choices.size(); ++j) comps.push_back(choices[j][idx[j]]);
        guard(H.cat.morphisms.size() < cap, "transformation enumeration exceeds limit");
        std::string label = "t(" + H.cat.objects[u] + "," + H.cat.objects[v] + ")#" +
                            std::to_string(k++);
        lookup[{u, v, comps}] = H.cat.morphisms.size();
        H.cat.morphisms.push_back({label, H.cat.objects[u], H.cat.objects[v]});
        H.components.push_back(std::move(comps));
        return true;
      });
    }
  }
  for (std::size_t u = 0; u < H.points.size(); ++u) {
    std::vector<std::size_t> ids;
    for (auto& b : B.objects) ids.push_back(C.id(H.points[u].obj.at(b)));
    H.cat.identities[H.cat.objects[u]] = lookup.at({u, u, ids});
  }
  for (std::size_t m1 = 0; m1 < H.cat.morphisms.size(); ++m1) {
    for (std::size_t m2 = 0; m2 < H.cat.morphisms.size(); ++m2) {
      if (H.cat.morphisms[m1].tgt != H.cat.morphisms[m2].src) continue;
      std::vector<std::size_t> comps;
      for (std::size_t j = 0; j < B.objects.size(); ++j)
        comps.push_back(C.then(H.components[m1][j], H.components[m2][j]));
      std::size_t u = static_cast<std::size_t>(
          std::find(H.cat.objects.begin(), H.cat.objects.end(), H.cat.morphisms[m1].src) -
          H.cat.objects.begin());
      std::size_t w = static_cast<std::size_t>(
          std::find(H.cat.objects.begin(), H.cat.objects.end(), H.cat.morphisms[m2].tgt) -
          H.cat.objects.begin());
      H.cat.comp[{m1, m2}] = lookup.at({u, w, comps});
    }
  }
  return H;
}

}  // namespace freeprod
