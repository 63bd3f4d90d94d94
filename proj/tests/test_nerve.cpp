#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "bldg/nerve.hpp"
#include "fixtures.hpp"

using namespace bldg;

TEST_CASE("apartment complex counts") {
  auto fano = fixtures::fano_building();
  auto n = apartment_complex(fano);
  CHECK(n.num_apartments == 28);
  CHECK(n.families.size() == 14);  // 7 points + 7 lines of PG(2,2)
  auto hex = fixtures::thin_hexagon();
  CHECK(apartment_complex(hex).num_apartments == 1);
  auto digon = fixtures::digon33_building();
  CHECK(apartment_complex(digon).num_apartments == 9);
}

TEST_CASE("nerve oracle is monotone and matches vertex intersections") {
  auto fano = fixtures::fano_building();
  auto n = apartment_complex(fano);
  auto apts = enumerate_apartments(fano);
  auto verts = building_vertices(fano);
  CHECK(verts.size() == 14);
  // Oracle agrees with direct shared-vertex computation on sampled triples.
  for (int a = 0; a < n.num_apartments; a += 3)
    for (int b = a + 1; b < n.num_apartments; b += 4)
      for (int c = b + 1; c < n.num_apartments; c += 5) {
        bool direct = false;
        for (const auto& v : verts) {
          auto res = residue_chambers(fano, v);
          auto in = [&](const Apartment& apt) {
            return std::any_of(res.begin(), res.end(), [&](int ch) { return apt.contains(ch); });
          };
          if (in(apts[a]) && in(apts[b]) && in(apts[c])) direct = true;
        }
        CHECK(n.intersects({a, b, c}) == direct);
        // Monotone: subsets of an intersecting family intersect.
        if (direct) {
          CHECK(n.intersects({a, b}));
          CHECK(n.intersects({a}));
        }
      }
  // Singletons always intersect.
  for (int a = 0; a < n.num_apartments; ++a) CHECK(n.intersects({a}));
}

TEST_CASE("maximal families are exactly the vertex families") {
  // Exhaustive for the Fano building (28 apartments <= 50).
  auto fano = fixtures::fano_building();
  auto n = apartment_complex(fano);
  auto apts = enumerate_apartments(fano);
  auto verts = building_vertices(fano);
  std::set<std::vector<int>> vertex_fams;
  for (const auto& v : verts) {
    auto res = residue_chambers(fano, v);
    std::vector<int> fam;
    for (std::size_t k = 0; k < apts.size(); ++k)
      if (std::any_of(res.begin(), res.end(), [&](int c) { return apts[k].contains(c); }))
        fam.push_back(static_cast<int>(k));
    vertex_fams.insert(fam);
  }
  std::set<std::vector<int>> nerve_fams(n.families.begin(), n.families.end());
  CHECK(vertex_fams == nerve_fams);
  // No family is contained in another.
  for (const auto& f : n.families)
    for (const auto& g : n.families)
      if (f != g)
        CHECK_FALSE(std::includes(g.begin(), g.end(), f.begin(), f.end()));
}

TEST_CASE("reconstruction of the Fano building") {
  auto fano = fixtures::fano_building();
  auto rec = reconstruct_building(apartment_complex(fano));
  CHECK(rec.families.size() == 14);
  CHECK(rec.building.num_chambers() == 21);
  CHECK(rec.building.num_types() == 2);
  CHECK(rec.building.coxeter().order(0, 1) == 3);
  CHECK(thickness_report(rec.building).is_thick);
}

TEST_CASE("reconstruction of GQ(2,2)") {
  auto gq = fixtures::gq22_building();
  auto rec = reconstruct_building(apartment_complex(gq));
  CHECK(rec.families.size() == 30);  // 15 points + 15 lines
  CHECK(rec.building.num_chambers() == 45);
  CHECK(rec.building.coxeter().order(0, 1) == 4);
}

TEST_CASE("thin input is rejected") {
  auto hex = fixtures::thin_hexagon();
  CHECK_THROWS_AS(reconstruct_building(apartment_complex(hex)), std::invalid_argument);
  auto rep = verify_round_trip(hex);
  CHECK_FALSE(rep.isomorphic);
  CHECK_FALSE(rep.failure.empty());
}

TEST_CASE("round trips") {
  auto fano = fixtures::fano_building();
  auto rep = verify_round_trip(fano);
  CHECK(rep.isomorphic);
  CHECK(rep.vertex_map.size() == 14);
  auto gq = fixtures::gq22_building();
  CHECK(verify_round_trip(gq).isomorphic);
}

TEST_CASE("round trip of a rank-4 join") {
  auto fano = fixtures::fano_building();
  auto big = join(fano, fano);
  auto rep = verify_round_trip(big);
  CHECK(rep.isomorphic);
  CHECK(rep.vertex_map.size() == 28);
}
