#include <catch2/catch_amalgamated.hpp>

#include "freeprod/fincat.hpp"
#include "oracles.hpp"

using namespace freeprod;

namespace {

Word mk(const PresentedCategory& p, const std::string& src,
        const std::vector<std::string>& labels) {
  Word w = empty_word(src);
  for (auto& l : labels) {
    auto e = static_cast<std::uint32_t>(p.gens.edge_index(l));
    w = concat(w, word_of_edges(p.gens, {e}));
  }
  return w;
}

}  // namespace

TEST_CASE("graph validation rejects duplicates and dangling edges") {
  FinGraph g;
  g.objects = {"a", "a"};
  REQUIRE_THROWS_AS(g.validate(), precondition_error);
  g.objects = {"a", "b"};
  g.edges = {{"f", "a", "c"}};
  REQUIRE_THROWS_AS(g.validate(), precondition_error);
  g.edges = {{"f", "a", "b"}, {"f", "b", "a"}};
  REQUIRE_THROWS_AS(g.validate(), precondition_error);
  g.edges = {{"f", "a", "b"}, {"g", "b", "a"}};
  REQUIRE_NOTHROW(g.validate());
}

TEST_CASE("category axioms hold for the builders") {
  for (const FinCategory& c :
       {walking_arrow(), terminal_category(), cyclic_group_category(2),
        cyclic_group_category(3), product_category({walking_arrow(), walking_arrow()})}) {
    REQUIRE(validate_fin_category(c).ok());
  }
}

TEST_CASE("axiom validator pinpoints a corrupted composition entry") {
  FinCategory c = cyclic_group_category(3);
  // redirect a*a to a instead of aa
  c.comp[{c.mor_index("a"), c.mor_index("a")}] = c.mor_index("a");
  Report rep = validate_fin_category(c);
  REQUIRE_FALSE(rep.ok());
  bool assoc_or_unit = false;
  for (auto& chk : rep.checks)
    if ((chk.name == "associativity" || chk.name == "unit-laws") &&
        chk.verdict == Verdict::fail)
      assoc_or_unit = true;
  REQUIRE(assoc_or_unit);
}

TEST_CASE("product of two walking arrows has 4 objects and 9 morphisms") {
  FinCategory p = product_category({walking_arrow(), walking_arrow()});
  REQUIRE(p.objects.size() == 4);
  REQUIRE(p.morphisms.size() == 9);
  REQUIRE(validate_fin_category(p).ok());
}

TEST_CASE("free category on a loop: bounded homs are words in the loop") {
  FinGraph g;
  g.objects = {"*"};
  g.edges = {{"x", "*", "*"}};
  PresentedCategory p = free_category(g);
  auto homs = hom_enumerate(p, "*", "*", {6});
  REQUIRE(homs.value.size() == 7);  // lengths 0..6
  REQUIRE(homs.exhausted);          // the loop continues past the bound
}

TEST_CASE("idempotent loop collapses to two classes at bound 6") {
  FinGraph g;
  g.objects = {"*"};
  g.edges = {{"x", "*", "*"}};
  PresentedCategory p = free_category(g);
  Word x = mk(p, "*", {"x"});
  auto q = quotient_category(p, {{concat(x, x), x}}, {6});
  auto homs = q.classes.hom_classes("*", "*");
  REQUIRE(homs.value.size() == oracle::word_classes({'x'}, {{"xx", "x"}}, 6));
  REQUIRE(homs.value.size() == 2);
  // canonical representative of the non-unit class is the single letter
  REQUIRE(q.classes.canonical(concat(x, concat(x, x))) == x);
  // equality queries beyond the bound are refused, not guessed
  Word x7 = x;
  for (int i = 0; i < 6; ++i) x7 = concat(x7, x);
  REQUIRE_THROWS_AS(q.classes.equal(x7, x), bound_exhausted_error);
}

TEST_CASE("presentation of a cyclic group round-trips through materialisation") {
  FinCategory z3 = cyclic_group_category(3);
  PresentedCategory p = presentation_of(z3);
  auto back = fin_category_of(p, {4});
  REQUIRE(back.has_value());
  REQUIRE(back->objects.size() == 1);
  REQUIRE(back->morphisms.size() == 3);
  REQUIRE(validate_fin_category(*back).ok());
}

TEST_CASE("free category with a cycle cannot be materialised") {
  FinGraph g;
  g.objects = {"*"};
  g.edges = {{"x", "*", "*"}};
  REQUIRE_FALSE(fin_category_of(free_category(g), {4}).has_value());
}

TEST_CASE("pushout of Z/2 <- 1 -> Z/2 has the infinite dihedral word classes") {
  PresentedCategory z2 = presentation_of(cyclic_group_category(2));
  PresentedCategory pt = presentation_of(terminal_category());
  CatFunctor to_left, to_right;
  to_left.obj_map["*"] = "*";
  to_right.obj_map["*"] = "*";
  auto po = pushout_cat(pt, to_left, z2, to_right, z2);
  REQUIRE(po.presentation.gens.objects.size() == 1);
  REQUIRE(po.presentation.gens.edges.size() == 2);
  WordEquality eq(po.presentation, {3});
  auto homs = eq.hom_classes(po.presentation.gens.objects[0], po.presentation.gens.objects[0]);
  REQUIRE(homs.value.size() == oracle::word_classes({'a', 'b'}, {{"aa", ""}, {"bb", ""}}, 3));
  REQUIRE(homs.value.size() == 7);
  REQUIRE(homs.exhausted);  // alternating words go on forever
}

TEST_CASE("pushout along identities returns the input up to bounded iso") {
  PresentedCategory wa = presentation_of(walking_arrow());
  CatFunctor idf;
  for (auto& o : wa.gens.objects) idf.obj_map[o] = o;
  for (std::size_t e = 0; e < wa.gens.edges.size(); ++e)
    idf.gen_map.push_back(word_of_edges(wa.gens, {static_cast<std::uint32_t>(e)}));
  auto po = pushout_cat(wa, idf, wa, idf, wa);
  WordEquality eq_in(wa, {4});
  WordEquality eq_out(po.presentation, {4});
  REQUIRE(isomorphic_on_bounded_homs(eq_in, eq_out));
}

TEST_CASE("functor validation accepts group maps and rejects bad typing") {
  PresentedCategory z2 = presentation_of(cyclic_group_category(2));
  WordEquality eq(z2, {4});

  CatFunctor flip;  // a |-> a
  flip.obj_map["*"] = "*";
  flip.gen_map.push_back(mk(z2, "*", {"a"}));
  REQUIRE(validate_functor(z2, flip, eq).ok());

  CatFunctor collapse;  // a |-> id
  collapse.obj_map["*"] = "*";
  collapse.gen_map.push_back(empty_word("*"));
  REQUIRE(validate_functor(z2, collapse, eq).ok());

  PresentedCategory wa = presentation_of(walking_arrow());
  WordEquality weq(wa, {4});
  CatFunctor bad;  // f |-> id(0): wrong target
  bad.obj_map["0"] = "0";
  bad.obj_map["1"] = "1";
  bad.gen_map.push_back(empty_word("0"));
  REQUIRE_FALSE(validate_functor(wa, bad, weq).ok());
}

TEST_CASE("functor validation reports a broken relation") {
  // domain: x with x;x = x.  codomain: Z/2.  x |-> a breaks the relation.
  FinGraph g;
  g.objects = {"*"};
  g.edges = {{"x", "*", "*"}};
  PresentedCategory dom = free_category(g);
  dom.normalizer = nullptr;
  Word x = mk(dom, "*", {"x"});
  dom.relations.push_back({concat(x, x), x});

  PresentedCategory z2 = presentation_of(cyclic_group_category(2));
  WordEquality eq(z2, {4});
  CatFunctor f;
  f.obj_map["*"] = "*";
  f.gen_map.push_back(mk(z2, "*", {"a"}));
  Report rep = validate_functor(dom, f, eq);
  REQUIRE_FALSE(rep.ok());
}

TEST_CASE("funny tensor of Z/2 with itself counts alternating words") {
  FunnyTensor t = funny_tensor_presentation({cyclic_group_category(2), cyclic_group_category(2)});
  REQUIRE(t.presentation.gens.objects.size() == 1);
  REQUIRE(t.presentation.gens.edges.size() == 2);
  const std::string obj = t.presentation.gens.objects[0];
  for (std::size_t k = 1; k <= 5; ++k) {
    // normal-form route
    auto nf = hom_enumerate(t.presentation, obj, obj, {k});
    // congruence-closure route (normalizer dropped by quotient_category)
    auto cc = quotient_category(t.presentation, {}, {k}).classes.hom_classes(obj, obj);
    std::size_t expect = oracle::word_classes({'a', 'b'}, {{"aa", ""}, {"bb", ""}}, k);
    REQUIRE(expect == 2 * k + 1);
    REQUIRE(nf.value.size() == expect);
    REQUIRE(cc.value.size() == expect);
  }
}

TEST_CASE("funny tensor of walking arrows has two diagonals") {
  FunnyTensor t = funny_tensor_presentation({walking_arrow(), walking_arrow()});
  REQUIRE(t.presentation.gens.objects.size() == 4);
  auto homs = hom_enumerate(t.presentation, "(0,0)", "(1,1)", {4});
  REQUIRE(homs.value.size() == 2);
  REQUIRE_FALSE(homs.exhausted);
  // and each straight edge is a singleton class
  auto side = hom_enumerate(t.presentation, "(0,0)", "(1,0)", {4});
  REQUIRE(side.value.size() == 1);
}

TEST_CASE("funny tensor normal forms are stable and minimal") {
  FunnyTensor t = funny_tensor_presentation({cyclic_group_category(2), cyclic_group_category(2)});
  const PresentedCategory& p = t.presentation;
  const std::string obj = p.gens.objects[0];
  std::string a = p.gens.edges[0].label, b = p.gens.edges[1].label;
  Word w = mk(p, obj, {a, a, b, a});
  Word n = p.normalizer(w);
  REQUIRE(n == mk(p, obj, {b, a}));
  REQUIRE(p.normalizer(n) == n);  // fixed point
  WordEquality eq(p, {4});
  REQUIRE(eq.equal(w, mk(p, obj, {b, a})));
}

TEST_CASE("canonical representatives are lexicographically least shortest words") {
  PresentedCategory z2 = presentation_of(cyclic_group_category(2));
  WordEquality eq(z2, {5});
  Word a = mk(z2, "*", {"a"});
  Word aaa = concat(a, concat(a, a));
  REQUIRE(eq.canonical(aaa) == a);
  REQUIRE(eq.canonical(concat(a, a)) == empty_word("*"));
}
