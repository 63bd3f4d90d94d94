#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bldg/coxeter.hpp"

namespace bldg {

/// A residue reference: the J-residue containing a chamber, canonicalized to
/// the least chamber of that residue. Two refs are equal iff the residues
/// coincide. cotype lists the types free to vary inside the residue.
struct SimplexRef {
  int chamber = -1;
  std::vector<int> cotype;  // sorted ascending

  friend bool operator==(const SimplexRef&, const SimplexRef&) = default;
  friend auto operator<=>(const SimplexRef&, const SimplexRef&) = default;
};

/// Thin sub-chamber-system isomorphic to the Coxeter complex; chambers sorted.
struct Apartment {
  std::vector<int> chambers;

  bool contains(int c) const;
  friend bool operator==(const Apartment&, const Apartment&) = default;
  friend auto operator<=>(const Apartment&, const Apartment&) = default;
};

/// W-valued distance together with one minimal gallery realizing it.
struct WDistance {
  int element = 0;              // index into ElementTable
  std::vector<int> gallery;     // chamber ids from c to d inclusive
};

/// Finite building as a chamber system: chambers 0..n-1 plus, for each type,
/// a partition of the chambers into panels. Construction validates the
/// partition, connectedness, panel sizes >= 2 and gatedness of every panel
/// seen from every chamber, then freezes the all-pairs W-distance matrix.
class Building {
 public:
  Building(CoxeterSystem w, int num_chambers,
           std::vector<std::vector<std::vector<int>>> panels_by_type);

  const CoxeterSystem& coxeter() const { return w_; }
  const ElementTable& table() const { return *table_; }
  int num_chambers() const { return num_chambers_; }
  int num_types() const { return w_.rank(); }

  const std::vector<std::vector<int>>& panels(int type) const { return panels_[type]; }
  int panel_index(int type, int chamber) const { return panel_of_[type][chamber]; }
  /// The chamber set of the i-panel containing `chamber`.
  const std::vector<int>& panel_chambers(int type, int chamber) const {
    return panels_[type][panel_of_[type][chamber]];
  }

  /// delta(c,d) as an ElementTable index.
  int delta(int c, int d) const { return delta_[c][d]; }
  int gallery_distance(int c, int d) const { return table_->length(delta_[c][d]); }
  bool opposite_chambers(int c, int d) const { return delta_[c][d] == table_->longest(); }

 private:
  CoxeterSystem w_;
  std::shared_ptr<const ElementTable> table_;
  int num_chambers_;
  std::vector<std::vector<std::vector<int>>> panels_;  // [type][panel][k] = chamber
  std::vector<std::vector<int>> panel_of_;             // [type][chamber] = panel index
  std::vector<std::vector<int>> delta_;                // [c][d] = element index
};

/// Canonical ref for the J-residue containing `chamber`.
SimplexRef make_simplex(const Building& b, int chamber, std::vector<int> cotype);
/// Chambers of the residue, sorted ascending.
std::vector<int> residue_chambers(const Building& b, const SimplexRef& a);

/// The thin building on the elements of W; i-adjacency is right
/// multiplication by s_i.
Building coxeter_complex(const CoxeterSystem& w);

/// Rank-1 building: n chambers, a single panel. Pre: n >= 2.
Building rank_one_building(int n);

/// Rank-2 building of type I2(m) from a point-line geometry. Validates the
/// generalized m-gon conditions (bipartite incidence graph of girth 2m and
/// diameter m) and builds the flag chamber system. Type 0 varies the point,
/// type 1 varies the line.
Building building_from_incidence(const std::vector<int>& points,
                                 const std::vector<std::vector<int>>& lines, int gonality);

/// Join over the disjoint union of type sets; chambers are pairs, encoded as
/// c1 * b2.num_chambers() + c2.
Building join(const Building& b1, const Building& b2);

WDistance w_distance(const Building& b, int c, int d);

/// The gate proj_a(c): unique chamber of Res(a) nearest to c.
int project_chamber(const Building& b, const SimplexRef& a, int c);
/// Largest common face of the gates {proj_a(x) : x in Res(b)}.
SimplexRef project_simplex(const Building& b, const SimplexRef& a, const SimplexRef& bb);

/// Convex hull of an opposite pair: all chambers on minimal galleries from c
/// to d. Pre: delta(c,d) = w0.
Apartment hull_apartment(const Building& b, int c, int d);
/// Some apartment containing c and d, deterministic via least-id completion.
Apartment apartment_containing(const Building& b, int c, int d);
std::vector<Apartment> enumerate_apartments(const Building& b, std::size_t cap = 1000000);

/// The chamber of A opposite c within A. Pre: c in A.
int antipode_in(const Building& b, const Apartment& a, int c);
/// Image of simplex s under the antipodal map of A. Pre: s has a chamber in A.
SimplexRef antipode_simplex(const Building& b, const Apartment& a, const SimplexRef& s);
bool are_opposite(const Building& b, const SimplexRef& x, const SimplexRef& y);

struct ThicknessReport {
  int min_panel = 0;
  int max_panel = 0;
  bool is_thick = false;
};
ThicknessReport thickness_report(const Building& b);
/// Verdict of the apartment criterion: checks only the panels meeting A.
ThicknessReport thickness_report(const Building& b, const Apartment& a);

/// A chamber map together with a type correspondence (image type per type).
struct ChamberMap {
  std::vector<int> image;     // [chamber of source] = chamber of target
  std::vector<int> type_map;  // [type of source] = type of target
};
struct MorphismReport {
  bool is_morphism = false;       // adjacency preserved (up to collapse)
  bool is_nondegenerate = false;  // no panel collapses to one chamber
  bool is_epimorphism = false;    // panel-surjectivity criterion
  bool direct_surjective = false; // brute-force image check
};
MorphismReport check_morphism(const Building& b, const Building& target, const ChamberMap& f);

struct DiagramFactor {
  std::vector<int> types;
  std::string label;   // irreducible diagram label
  bool thin = false;   // all panels of these types have exactly 2 chambers
};
std::vector<DiagramFactor> diagram_factorization(const Building& b);

}  // namespace bldg
