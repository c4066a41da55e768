#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "freeprod/catmonad.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {

SetVGraph arrow_graph() { return make_set_graph({"0", "1"}, {{"f", "0", "1"}}); }
SetVGraph loop_graph() { return make_set_graph({"l"}, {{"u", "l", "l"}}); }
SetVGraph dot_graph() { return make_set_graph({"d"}, {}); }
SetVGraph chain_graph() {
  return make_set_graph({"0", "1", "2"}, {{"f", "0", "1"}, {"g", "1", "2"}});
}

oracle::OGraph arrow_og() {
  oracle::OGraph g;
  g.objects = {"0", "1"};
  g.hom[{"0", "1"}] = 1;
  return g;
}

oracle::OGraph loop_og() {
  oracle::OGraph g;
  g.objects = {"l"};
  g.hom[{"l", "l"}] = 1;
  return g;
}

// the square obtained by freely combining two single-edge graphs
oracle::OGraph square_og() {
  oracle::OGraph g;
  g.objects = {"(0,0)", "(0,1)", "(1,0)", "(1,1)"};
  g.hom[{"(0,0)", "(1,0)"}] = 1;
  g.hom[{"(0,0)", "(0,1)"}] = 1;
  g.hom[{"(1,0)", "(1,1)"}] = 1;
  g.hom[{"(0,1)", "(1,1)"}] = 1;
  return g;
}

// morphism counts of the walking arrow, for the transformation oracle
oracle::OGraph wa_counts() {
  oracle::OGraph g;
  g.objects = {"0", "1"};
  g.hom[{"0", "0"}] = 1;
  g.hom[{"0", "1"}] = 1;
  g.hom[{"1", "1"}] = 1;
  return g;
}

std::vector<std::vector<std::size_t>> z2_table() {
  return {{0, 1}, {1, 0}};
}

unsigned long long total_paths(const oracle::OGraph& g, std::size_t bound) {
  unsigned long long n = 0;
  for (const auto& [pr, c] : oracle::path_counts(g, bound)) n += c;
  return n;
}

}  // namespace

TEST_CASE("free path structures on finite graphs") {
  PathAlgebra A = path_algebra(arrow_graph());
  REQUIRE(A.finite);
  std::vector<Word> reps;
  auto fin = free_path_category(A, 4, &reps);
  REQUIRE(fin.has_value());
  REQUIRE(fin->morphisms.size() == 3);
  REQUIRE(fin->morphisms.size() == total_paths(arrow_og(), 4));
  REQUIRE_FALSE(oracle::paths_exceed(arrow_og(), 4));
  REQUIRE(validate_fin_category(*fin).ok());
  REQUIRE(reps.size() == 3);
  // same shape as the built-in walking arrow
  FinCategory wa = walking_arrow();
  REQUIRE(fin->objects.size() == wa.objects.size());
  for (const auto& a : fin->objects)
    for (const auto& b : fin->objects)
      REQUIRE(fin->hom(a, b).size() == wa.hom(a, b).size());

  // a loop never materialises: its paths outgrow every bound
  PathAlgebra L = path_algebra(loop_graph());
  REQUIRE_FALSE(L.finite);
  REQUIRE_FALSE(free_path_category(L, 4).has_value());
  REQUIRE(paths_upto(L.cat.gens, 4).size() == 5);
  REQUIRE(total_paths(loop_og(), 4) == 5);
  REQUIRE(oracle::paths_exceed(loop_og(), 4));

  // the empty product of graphs carries the one-point structure
  FreeProduct<FinSetBase> none = free_product_graphs(std::vector<SetVGraph>{});
  PathAlgebra T0 = path_algebra(none.graph);
  auto pt = free_path_category(T0, 4);
  REQUIRE(pt.has_value());
  REQUIRE(pt->objects.size() == 1);
  REQUIRE(pt->morphisms.size() == 1);
  REQUIRE(validate_fin_category(*pt).ok());
}

TEST_CASE("path flattening satisfies the unit and associativity laws") {
  Report r = validate_path_monad({arrow_graph(), loop_graph(), chain_graph()}, 4);
  REQUIRE(r.ok());
  REQUIRE(r.instances() > 100);
  REQUIRE(r.exhausted());  // the loop's longer paths stay unchecked

  Report acyclic = validate_path_monad({arrow_graph(), chain_graph()}, 4);
  REQUIRE(acyclic.ok());
  REQUIRE_FALSE(acyclic.exhausted());
}

TEST_CASE("interleaving factor paths is coherent and symmetric") {
  Report r = validate_path_interleaving(
      {{arrow_graph(), arrow_graph()}, {loop_graph(), dot_graph()}}, 3);
  REQUIRE(r.ok());
  REQUIRE(r.instances() > 50);
  for (const auto& c : r.checks) REQUIRE(c.instances > 0);
}

TEST_CASE("finite categories carry the path action laws") {
  REQUIRE(validate_cat_algebra(walking_arrow()).ok());
  REQUIRE(validate_cat_algebra(cyclic_group_category(2)).ok());
  REQUIRE(validate_cat_algebra(cyclic_group_category(3)).ok());
  REQUIRE(validate_cat_algebra(
              product_category({walking_arrow(), walking_arrow()}))
              .ok());

  SetVGraph g = carrier_graph(walking_arrow());
  REQUIRE(g.objects.size() == 2);
  REQUIRE(g.at("0", "1").size() == 1);
  REQUIRE(g.at("0", "0").size() == 1);
  REQUIRE(g.at("1", "0").empty());

  // a table breaking the unit law fails the letter action
  FinCategory bad = cyclic_group_category(2);
  bad.comp[{bad.id("*"), bad.mor_index("a")}] = bad.mor_index("e");
  Report rb = validate_cat_algebra(bad);
  REQUIRE_FALSE(rb.ok());
  REQUIRE(rb.checks.front().verdict == Verdict::fail);

  // a table breaking associativity fails the flattening law only
  FinCategory skew = cyclic_group_category(3);
  skew.comp[{skew.mor_index("a"), skew.mor_index("aa")}] = skew.mor_index("a");
  Report rs = validate_cat_algebra(skew);
  REQUIRE_FALSE(rs.ok());
}

TEST_CASE("homs of categories collect functors and loose families") {
  FinCategory wa = walking_arrow();
  CatHom H = cat_hom_algebra(wa, wa);
  REQUIRE(H.points.size() == 3);
  for (const auto& F : H.points) REQUIRE(fin_functor_valid(wa, wa, F));
  REQUIRE(H.cat.morphisms.size() ==
          oracle::count_transformation_families(
              wa_counts(), {{"0", "0"}, {"0", "1"}, {"1", "1"}}));
  REQUIRE(H.cat.morphisms.size() == 6);
  REQUIRE(validate_fin_category(H.cat).ok());
  REQUIRE(validate_cat_algebra(H.cat).ok());

  FinCategory z2 = cyclic_group_category(2);
  CatHom HZ = cat_hom_algebra(z2, z2);
  REQUIRE(HZ.points.size() == oracle::count_monoid_homs(z2_table(), z2_table()));
  REQUIRE(HZ.points.size() == 2);
  oracle::OGraph zc;
  zc.objects = {"*"};
  zc.hom[{"*", "*"}] = 2;
  REQUIRE(HZ.cat.morphisms.size() ==
          oracle::count_transformation_families(zc, {{"*"}, {"*"}}));
  REQUIRE(HZ.cat.morphisms.size() == 8);
  REQUIRE(validate_fin_category(HZ.cat).ok());

  // homming out of the one-point structure returns the target
  for (const FinCategory& B : {walking_arrow(), cyclic_group_category(2)}) {
    CatHom U = cat_hom_algebra(terminal_category(), B);
    REQUIRE(U.points.size() == B.objects.size());
    REQUIRE(U.cat.morphisms.size() == B.morphisms.size());
    REQUIRE(validate_fin_category(U.cat).ok());
  }
}

TEST_CASE("pointwise families over a graph into a category") {
  SetVGraph X = arrow_graph();
  FinCategory Y = *free_path_category(path_algebra(arrow_graph()), 4);
  PointwiseCat P = pointwise_path_algebra(X, Y);
  oracle::OGraph yc;  // morphism counts of Y per ordered pair
  yc.objects = {"0", "1"};
  yc.hom[{"0", "0"}] = 1;
  yc.hom[{"0", "1"}] = 1;
  yc.hom[{"1", "1"}] = 1;
  REQUIRE(P.points.size() == oracle::count_graph_morphisms(arrow_og(), yc));
  REQUIRE(P.points.size() == 3);
  REQUIRE(P.cat.morphisms.size() ==
          oracle::count_transformation_families(
              yc, {{"0", "0"}, {"0", "1"}, {"1", "1"}}));
  REQUIRE(validate_fin_category(P.cat).ok());
  REQUIRE(validate_cat_algebra(P.cat).ok());

  // over a category's own carrier, the functorial points are the homs
  FinCategory z2 = cyclic_group_category(2);
  PointwiseCat P2 = pointwise_path_algebra(carrier_graph(z2), z2);
  REQUIRE(P2.points.size() == 4);
  std::size_t functorial = 0;
  for (const auto& f : P2.points)
    if (vmor_functorial(z2, z2, f)) ++functorial;
  REQUIRE(functorial == oracle::count_monoid_homs(z2_table(), z2_table()));
  REQUIRE(P2.cat.morphisms.size() == 32);  // 4*4 pairs, 2 families each
  REQUIRE(validate_fin_category(P2.cat).ok());
}

TEST_CASE("evaluating paths is a functor between pointwise structures") {
  SetVGraph X = arrow_graph();
  FinCategory B = cyclic_group_category(2);
  PathAlgebra TX = path_algebra(X);
  std::vector<Word> reps;
  FinCategory TXfin = *free_path_category(TX, 4, &reps);

  PointwiseCat P1 = pointwise_path_algebra(X, B);
  PointwiseCat P2 = pointwise_path_algebra(carrier_graph(TXfin), B);
  REQUIRE(P1.points.size() == 2);
  REQUIRE(P2.points.size() == 8);

  // a point X -> B extends to paths by composing its letter images
  auto extend = [&](const VMor<FinSetBase>& f) {
    VMor<FinSetBase> fh;
    for (const auto& o : TXfin.objects) fh.obj[o] = f.obj.at(o);
    SetVGraph ctx = carrier_graph(TXfin);
    SetVGraph cb = carrier_graph(B);
    for (const auto& a : TXfin.objects)
      for (const auto& b : TXfin.objects) {
        const SetObj& dom = ctx.at(a, b);
        SetMor m{dom, cb.at(fh.obj.at(a), fh.obj.at(b)), {}};
        for (const auto& e : dom) {
          const Word& w = reps[static_cast<std::size_t>(
              TXfin.mor_index(e.name()))];
          std::vector<std::size_t> imgs;
          std::string at = w.src;
          for (auto gi : w.gens) {
            const auto& edge = TX.cat.gens.edges[gi];
            Elem img = f.homs.at({edge.src, edge.tgt})(TX.gen_elem[gi]);
            imgs.push_back(B.mor_index(img.name()));
            at = edge.tgt;
          }
          std::size_t img = compose_path(B, f.obj.at(w.src), imgs);
          m.map.emplace(e, Elem::atom(B.morphisms[img].label));
        }
        fh.homs[{a, b}] = std::move(m);
      }
    return fh;
  };

  FinFunctor F;
  F.obj.resize(P1.points.size());
  for (std::size_t i = 0; i < P1.points.size(); ++i) {
    VMor<FinSetBase> fh = extend(P1.points[i]);
    auto it = std::find(P2.points.begin(), P2.points.end(), fh);
    REQUIRE(it != P2.points.end());
    F.obj[i] = static_cast<std::size_t>(it - P2.points.begin());
  }
  std::map<std::tuple<std::size_t, std::size_t, std::vector<std::size_t>>,
           std::size_t>
      p2idx;
  for (std::size_t m = 0; m < P2.families.size(); ++m)
    p2idx[P2.families[m]] = m;
  F.mor.resize(P1.families.size());
  for (std::size_t m = 0; m < P1.families.size(); ++m) {
    const auto& [i, j, fam] = P1.families[m];
    F.mor[m] = p2idx.at({F.obj[i], F.obj[j], fam});
  }
  REQUIRE(fin_functor_valid(P1.cat, P2.cat, F));
}

TEST_CASE("jointly functorial equals functorial in each variable") {
  FinCategory z2 = cyclic_group_category(2);
  SetVGraph g = carrier_graph(z2);
  std::vector<FinCategory> As = {z2, z2};
  auto all = enumerate_graph_multimaps({g, g}, g);
  REQUIRE(all.size() == 16);
  std::size_t joint = 0;
  bool half_functorial_seen = false;
  for (const auto& f : all) {
    bool v0 = is_functorial_in_variable(As, z2, f, 0);
    bool v1 = is_functorial_in_variable(As, z2, f, 1);
    bool m2 = is_multi_functorial(As, z2, f, 2);
    bool m3 = is_multi_functorial(As, z2, f, 3);
    REQUIRE(m2 == (v0 && v1));
    REQUIRE(m3 == m2);
    if (m2) ++joint;
    if (v0 && !v1) half_functorial_seen = true;
  }
  REQUIRE(joint == 4);
  REQUIRE(half_functorial_seen);

  // with one input the two notions coincide with plain functoriality
  auto unary = enumerate_graph_multimaps({g}, g);
  REQUIRE(unary.size() == 4);
  std::size_t fun = 0;
  for (const auto& f : unary) {
    bool v0 = is_functorial_in_variable({z2}, z2, f, 0);
    REQUIRE(is_multi_functorial({z2}, z2, f) == v0);
    if (v0) ++fun;
  }
  REQUIRE(fun == oracle::count_monoid_homs(z2_table(), z2_table()));
}

TEST_CASE("separately functorial multimaps match free-structure counts") {
  FinCategory wa = walking_arrow();
  FinCategory z2 = cyclic_group_category(2);

  auto em22 = enumerate_em_multimaps({wa, wa}, wa);
  REQUIRE(em22.size() == oracle::count_separately_monotone(2, 2, 2));
  REQUIRE(em22.size() == 6);

  // same count as functors out of the two-factor presentation, and the
  // induced functors are exactly the enumerated ones
  FunnyTensor ft = funny_tensor_presentation({wa, wa});
  auto fs = enumerate_functors_from_presentation(ft.presentation, wa);
  REQUIRE(fs.size() == 6);
  std::set<PresentedFunctor> induced;
  for (const auto& f : em22) {
    PresentedFunctor pf;
    pf.gen_mor.resize(ft.presentation.gens.edges.size());
    for (const auto& [tup, o] : f.obj) pf.obj[tuple_name(tup)] = o;
    for (const auto& [key, gi] : ft.gen_index) {
      const auto& [j, tup, m] = key;
      const auto& am = wa.morphisms[m];
      std::vector<std::string> at = tup;
      at[j] = am.src;
      Elem img = f.part(j, at, am.src, am.tgt)(Elem::atom(am.label));
      pf.gen_mor[gi] = wa.mor_index(img.name());
    }
    induced.insert(pf);
  }
  REQUIRE(induced == std::set<PresentedFunctor>(fs.begin(), fs.end()));

  auto emz = enumerate_em_multimaps({z2, z2}, z2);
  unsigned long long homs = oracle::count_monoid_homs(z2_table(), z2_table());
  REQUIRE(emz.size() == homs * homs);

  // mixed case: the group can only act trivially on each slice, so the
  // count is the number of functors between the arrows
  auto emmix = enumerate_em_multimaps({wa, z2}, wa);
  REQUIRE(emmix.size() == 3);

  // no inputs: a multimap is a point of the target
  REQUIRE(enumerate_em_multimaps({}, wa).size() == 2);
  REQUIRE(enumerate_em_multimaps({}, z2).size() == 1);
}

TEST_CASE("category algebras form a symmetric multicategory") {
  Multicat M = path_em_multicat(
      {{"two", walking_arrow()}, {"z2", cyclic_group_category(2)}});
  REQUIRE(M.hom({"two", "two"}, "two").size() == 6);
  REQUIRE(M.hom({"z2", "z2"}, "z2").size() == 4);
  REQUIRE(M.hom({"two", "z2"}, "two").size() == 3);
  REQUIRE(M.hom({}, "two").size() == 2);
  Report r = validate_symmetric_multicat(M, MulticatLimits{2, 20000});
  REQUIRE(r.ok());
  REQUIRE(r.instances() > 0);
}

TEST_CASE("tensor of categories agrees with its free presentation") {
  FinCategory wa = walking_arrow();
  PathTensor t = tensor_path_algebras({wa, wa}, WordEqualityBound{4});
  REQUIRE(t.bound == 4);
  REQUIRE(t.presentation.gens.objects.size() == 4);  // identity on objects
  REQUIRE(t.underlying_preserved.has_value());
  REQUIRE(*t.underlying_preserved);

  auto q = fin_category_of(t.presentation, WordEqualityBound{4});
  REQUIRE(q.has_value());
  REQUIRE(q->objects.size() == 4);
  REQUIRE(q->morphisms.size() == 10);
  REQUIRE(validate_fin_category(*q).ok());
  REQUIRE(validate_cat_algebra(*q).ok());
  // the two diagonals stay distinct: no interchange between the factors
  REQUIRE(q->hom("(0,0)", "(1,1)").size() == 2);

  // generator-by-generator comparison with the two-factor presentation
  FunnyTensor ft = funny_tensor_presentation({wa, wa});
  WordEquality ftEq(ft.presentation, WordEqualityBound{4});
  CatFunctor F;
  for (const auto& o : t.presentation.gens.objects) F.obj_map[o] = o;
  F.gen_map.resize(t.presentation.gens.edges.size());
  for (const auto& [key, gi] : t.gen) {
    const auto& [j, tup, m] = key;
    if (wa.is_identity(m)) {
      F.gen_map[gi] = empty_word(tuple_name(tup));
    } else {
      F.gen_map[gi] =
          word_of_edges(ft.presentation.gens, {ft.gen_index.at({j, tup, m})});
    }
  }
  bool ex = true;
  REQUIRE(functor_bounded_iso(t.presentation, F, ftEq, 4, &ex));
  REQUIRE_FALSE(ex);

  // gluing two cylinders over the discrete corners gives the same homs
  FinCategory d2 = discrete_category({"0", "1"});
  PresentedCategory corners = presentation_of(product_category({d2, d2}));
  PresentedCategory left = presentation_of(product_category({wa, d2}));
  PresentedCategory right = presentation_of(product_category({d2, wa}));
  CatFunctor inl, inr;
  for (const auto& o : corners.gens.objects) {
    inl.obj_map[o] = o;
    inr.obj_map[o] = o;
  }
  PushoutResult po = pushout_cat(corners, inl, left, inr, right);
  WordEquality poEq(po.presentation, WordEqualityBound{4});
  REQUIRE(isomorphic_on_bounded_homs(*t.classes, poEq));

  // the cartesian product has one diagonal too few to match
  PresentedCategory cart = presentation_of(product_category({wa, wa}));
  WordEquality cartEq(cart, WordEqualityBound{4});
  REQUIRE_FALSE(isomorphic_on_bounded_homs(*t.classes, cartEq));

  // dropping a unit relation leaves an extra loop class behind
  PresentedCategory broken = t.presentation;
  broken.relations.erase(broken.relations.begin());
  WordEquality brokenEq(broken, WordEqualityBound{4});
  REQUIRE_FALSE(isomorphic_on_bounded_homs(brokenEq, ftEq));

  // the universal multimap lands where it should
  Word e = t.embed(0, {"0", "0"}, wa.mor_index("f"));
  REQUIRE(e.src == "(0,0)");
  REQUIRE(e.tgt == "(1,0)");
  Word eid = t.embed(0, {"0", "0"}, wa.id("0"));
  REQUIRE(t.classes->equal(eid, empty_word("(0,0)")));
}

TEST_CASE("free factors make the tensor split") {
  PathAlgebra split = tensor_free_paths({arrow_graph(), arrow_graph()});
  auto splitFin = free_path_category(split, 4);
  REQUIRE(splitFin.has_value());
  REQUIRE(splitFin->morphisms.size() == total_paths(square_og(), 4));
  REQUIRE(splitFin->morphisms.size() == 10);
  REQUIRE(splitFin->hom("(0,0)", "(1,1)").size() ==
          oracle::path_counts(square_og(), 4).at({"(0,0)", "(1,1)"}));

  // the generic construction on the materialised free structures gives the
  // same bounded homs, pair by pair
  FinCategory TX = *free_path_category(path_algebra(arrow_graph()), 4);
  PathTensor t = tensor_path_algebras({TX, TX}, WordEqualityBound{4});
  REQUIRE(t.underlying_preserved.has_value());
  REQUIRE(*t.underlying_preserved);
  for (const auto& a : t.presentation.gens.objects)
    for (const auto& b : t.presentation.gens.objects) {
      auto cls = t.classes->hom_classes(a, b);
      REQUIRE(cls.value.size() == splitFin->hom(a, b).size());
    }

  // no factors: the unit, one object and its identity
  PathTensor unit = tensor_path_algebras({}, WordEqualityBound{4});
  auto q0 = fin_category_of(unit.presentation, WordEqualityBound{4});
  REQUIRE(q0.has_value());
  REQUIRE(q0->objects.size() == 1);
  REQUIRE(q0->morphisms.size() == 1);
}

TEST_CASE("maps out of a tensor and into a hom count multimaps") {
  FinCategory wa = walking_arrow();
  FinCategory z2 = cyclic_group_category(2);

  PathTensor t = tensor_path_algebras({wa, wa}, WordEqualityBound{4});
  auto out_maps = enumerate_functors_from_presentation(t.presentation, wa);
  auto em = enumerate_em_multimaps({wa, wa}, wa);
  REQUIRE(out_maps.size() == em.size());
  // and not just the count: each multimap induces exactly one functor
  std::set<PresentedFunctor> induced;
  for (const auto& f : em) {
    PresentedFunctor pf;
    pf.gen_mor.resize(t.presentation.gens.edges.size());
    for (const auto& [tup, o] : f.obj) pf.obj[tuple_name(tup)] = o;
    for (const auto& [key, gi] : t.gen) {
      const auto& [j, tup, m] = key;
      const auto& am = wa.morphisms[m];
      Elem img = f.part(j, tup, am.src, am.tgt)(Elem::atom(am.label));
      pf.gen_mor[gi] = wa.mor_index(img.name());
    }
    induced.insert(pf);
  }
  REQUIRE(induced ==
          std::set<PresentedFunctor>(out_maps.begin(), out_maps.end()));

  PathTensor tz = tensor_path_algebras({z2, z2}, WordEqualityBound{4});
  REQUIRE(enumerate_functors_from_presentation(tz.presentation, z2).size() ==
          enumerate_em_multimaps({z2, z2}, z2).size());

  // maps into the hom are two-variable multimaps
  CatHom H = cat_hom_algebra(wa, wa);
  REQUIRE(enumerate_functors(wa, H.cat).size() == em.size());
  CatHom HZ = cat_hom_algebra(z2, z2);
  REQUIRE(enumerate_functors(z2, HZ.cat).size() ==
          enumerate_em_multimaps({z2, z2}, z2).size());
}

TEST_CASE("monoid tensors enumerate amalgamated words") {
  FinCategory z2 = cyclic_group_category(2);
  FinCategory z3 = cyclic_group_category(3);

  PathTensor t = tensor_path_algebras({z2, z2}, WordEqualityBound{4});
  auto cls = t.classes->hom_classes("(*,*)", "(*,*)");
  REQUIRE(cls.value.size() == oracle::alternating_word_count({1, 1}, 4));
  REQUIRE(cls.value.size() ==
          oracle::word_classes({'a', 'b'}, {{"aa", ""}, {"bb", ""}}, 4));
  REQUIRE(cls.value.size() == 9);
  REQUIRE(cls.exhausted);  // the amalgam is infinite
  REQUIRE(t.exhausted);
  REQUIRE(t.underlying_preserved.has_value());
  REQUIRE(*t.underlying_preserved);

  PathTensor t32 = tensor_path_algebras({z3, z2}, WordEqualityBound{3});
  auto cls32 = t32.classes->hom_classes("(*,*)", "(*,*)");
  REQUIRE(cls32.value.size() == oracle::alternating_word_count({2, 1}, 3));
  REQUIRE(cls32.value.size() == 14);
  REQUIRE(t32.underlying_preserved.has_value());
  REQUIRE(*t32.underlying_preserved);
}
