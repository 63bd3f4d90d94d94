#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "bldg/coarse.hpp"
#include "bldg/cone.hpp"
#include "bldg/json_io.hpp"
#include "bldg/nerve.hpp"
#include "bldg/projectivity.hpp"

using nlohmann::json;

namespace {

constexpr int kDomainError = 1;
constexpr std::size_t kExportCap = 10000;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void emit(const json& report, bool as_json, const std::vector<std::string>& order) {
  if (as_json) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  for (const auto& key : order) {
    const auto& v = report.at(key);
    std::cout << key << "=" << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

// Flags of a geometry in chamber order: lexicographic (point position, line index).
std::vector<std::pair<int, int>> flags_of(const bldg::GeometrySpec& g) {
  std::vector<std::pair<int, int>> flags;
  for (std::size_t pi = 0; pi < g.points.size(); ++pi)
    for (std::size_t li = 0; li < g.lines.size(); ++li)
      for (int pid : g.lines[li])
        if (pid == g.points[pi]) flags.push_back({static_cast<int>(pi), static_cast<int>(li)});
  return flags;
}

// --panel TYPE:INDEX. "point:i" selects the flags through the i-th point
// (which vary the line, cotype {1}); "line:j" the flags on the j-th line
// (cotype {0}); a numeric type selects the INDEX-th panel of that type.
bldg::SimplexRef parse_panel(const bldg::Building& b, const bldg::GeometrySpec& g,
                             const std::string& sel) {
  auto colon = sel.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--panel expects TYPE:INDEX, got '" + sel + "'");
  std::string type = sel.substr(0, colon);
  int index = std::stoi(sel.substr(colon + 1));
  auto flags = flags_of(g);
  if (type == "point" || type == "line") {
    if (b.num_types() != 2)
      throw std::invalid_argument("point/line panels need a rank-2 building");
    for (std::size_t c = 0; c < flags.size(); ++c) {
      if (type == "point" && flags[c].first == index)
        return make_simplex(b, static_cast<int>(c), {1});
      if (type == "line" && flags[c].second == index)
        return make_simplex(b, static_cast<int>(c), {0});
    }
    throw std::invalid_argument("no such " + type + ": " + std::to_string(index));
  }
  int t = std::stoi(type);
  if (t < 0 || t >= b.num_types()) throw std::invalid_argument("panel type out of range");
  if (index < 0 || index >= static_cast<int>(b.panels(t).size()))
    throw std::invalid_argument("panel index out of range");
  return make_simplex(b, b.panels(t)[index].front(), {t});
}

std::string diagram_label(const bldg::Building& b) {
  auto factors = bldg::diagram_factorization(b);
  std::string label;
  for (const auto& f : factors) {
    if (!label.empty()) label += " x ";
    label += f.label;
  }
  return label;
}

int cmd_build(const std::string& file, bool as_json) {
  auto g = bldg::geometry_from_json(load_json(file));
  auto b = bldg::building_from_geometry(g);
  json rep;
  rep["chambers"] = b.num_chambers();
  rep["rank"] = b.num_types();
  rep["diagram"] = diagram_label(b);
  rep["panels_type_0"] = b.panels(0).size();
  rep["panels_type_1"] = b.panels(1).size();
  emit(rep, as_json, {"chambers", "rank", "diagram", "panels_type_0", "panels_type_1"});
  return 0;
}

int cmd_inspect(const std::string& file, bool as_json) {
  auto g = bldg::geometry_from_json(load_json(file));
  auto b = bldg::building_from_geometry(g);
  auto thick = bldg::thickness_report(b);
  auto apartments = bldg::enumerate_apartments(b);
  json rep;
  rep["chambers"] = b.num_chambers();
  rep["thick"] = bool_str(thick.is_thick);
  rep["apartments"] = apartments.size();
  rep["diagram"] = diagram_label(b);
  rep["min_panel"] = thick.min_panel;
  rep["max_panel"] = thick.max_panel;
  emit(rep, as_json, {"chambers", "thick", "apartments", "diagram", "min_panel", "max_panel"});
  return 0;
}

int cmd_proj(const std::string& file, const std::string& panel, int bound, bool as_json) {
  auto g = bldg::geometry_from_json(load_json(file));
  auto b = bldg::building_from_geometry(g);
  auto r = parse_panel(b, g, panel);
  auto rep = bldg::projectivity_group(b, r, bound);
  json out;
  out["residue"] = rep.residue_size;
  out["order"] = rep.group_order;
  out["even_order"] = rep.even_order;
  out["transitive"] = bool_str(rep.transitive);
  out["2-transitive"] = bool_str(rep.two_transitive);
  emit(out, as_json, {"residue", "order", "even_order", "transitive", "2-transitive"});
  return 0;
}

int cmd_reconstruct(const std::string& file, bool as_json) {
  auto g = bldg::geometry_from_json(load_json(file));
  auto b = bldg::building_from_geometry(g);
  auto nerve = bldg::apartment_complex(b);
  auto rec = bldg::reconstruct_building(nerve);  // throws on thin/corrupt input
  auto round = bldg::verify_round_trip(b);
  json rep;
  rep["apartments"] = nerve.num_apartments;
  rep["families"] = nerve.families.size();
  rep["chambers"] = rec.building.num_chambers();
  rep["isomorphic"] = bool_str(round.isomorphic);
  rep["type_preserving"] = bool_str(round.type_preserving);
  emit(rep, as_json, {"apartments", "families", "chambers", "isomorphic", "type_preserving"});
  return 0;
}

int cmd_tree(const std::string& file, bool classify, bool as_json) {
  auto t = bldg::tree_from_spec(bldg::tree_spec_from_json(load_json(file)));
  auto rep = bldg::structure_report(t);
  json out;
  out["vertices"] = t.num_vertices();
  out["edges"] = t.edges().size();
  out["ends"] = rep.ends.size();
  out["branch_points"] = rep.branch_points.size();
  std::vector<std::string> order{"vertices", "edges", "ends", "branch_points"};
  if (classify) {
    out["type"] = rep.type_label();
    order.push_back("type");
  }
  emit(out, as_json, order);
  return 0;
}

int cmd_cone(const std::string& file, const std::string& panel, const std::string& radius,
             bool as_json) {
  auto g = bldg::geometry_from_json(load_json(file));
  auto b = bldg::building_from_geometry(g);
  auto chart = bldg::spherical_chart(b.coxeter());
  if (panel.empty()) {
    auto rep = bldg::apex_is_unique_thick_point(b, chart);
    json out;
    out["apex_thick"] = bool_str(rep.apex_thick);
    out["interior_points_unique"] = bool_str(rep.interior_points_unique);
    out["samples"] = rep.samples;
    emit(out, as_json, {"apex_thick", "interior_points_unique", "samples"});
    return 0;
  }
  auto a = parse_panel(b, g, panel);
  // Least opposite panel.
  bldg::SimplexRef opp;
  bool found = false;
  for (int c = 0; c < b.num_chambers() && !found; ++c)
    for (int t = 0; t < b.num_types() && !found; ++t) {
      auto cand = make_simplex(b, c, {t});
      if (cand.chamber == c && bldg::are_opposite(b, a, cand)) {
        opp = cand;
        found = true;
      }
    }
  if (!found) throw std::invalid_argument("panel has no opposite panel");
  bldg::Rat rad = radius.empty() ? bldg::Rat{1} : bldg::rat_from_string(radius);
  auto tree = bldg::cone_wall_tree(b, a, opp, rad);
  auto srep = bldg::structure_report(tree);
  if (as_json) {
    json out;
    out["tree"] = bldg::tree_to_json(tree);
    out["type"] = srep.type_label();
    out["ends"] = srep.ends.size();
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::cout << "ends=" << srep.ends.size() << "\n";
  std::cout << "type=" << srep.type_label() << "\n";
  return 0;
}

int cmd_coarse(const std::string& file, const std::string& radius, bool as_json) {
  auto t = bldg::tree_from_spec(bldg::tree_spec_from_json(load_json(file)));
  auto apts = bldg::all_apartments(t);
  if (apts.empty()) throw std::invalid_argument("tree has no apartments");
  bldg::Rat lo{0}, hi{0};
  bool first = true;
  for (std::size_t i = 0; i < apts.size(); ++i)
    for (std::size_t j = i + 1; j < apts.size(); ++j) {
      std::vector<bldg::TreePoint> u, v;
      for (int p : apts[i].path) u.push_back(bldg::TreePoint::at_vertex(p));
      for (int p : apts[j].path) v.push_back(bldg::TreePoint::at_vertex(p));
      auto d = bldg::hausdorff_distance(t, u, v);
      if (first || d < lo) lo = d;
      if (first || d > hi) hi = d;
      first = false;
    }
  json out;
  out["apartments"] = apts.size();
  out["min_hausdorff"] = bldg::rat_to_string(lo);
  out["max_hausdorff"] = bldg::rat_to_string(hi);
  std::vector<std::string> order{"apartments", "min_hausdorff", "max_hausdorff"};
  if (!radius.empty()) {
    auto rep = bldg::common_end(t, apts, bldg::rat_from_string(radius));
    std::vector<int> end_ids;
    for (int e : rep.ends) end_ids.push_back(t.id(e));
    out["common_ends"] = end_ids;
    out["bounded"] = bool_str(rep.bounded);
    out["diameter"] = bldg::rat_to_string(rep.diameter);
    order.insert(order.end(), {"common_ends", "bounded", "diameter"});
  }
  emit(out, as_json, order);
  return 0;
}

std::string export_dot(const bldg::Building& b, const std::string& kind) {
  if (static_cast<std::size_t>(b.num_chambers()) > kExportCap)
    throw std::runtime_error("building too large to export");
  std::ostringstream os;
  if (kind == "chamber_graph") {
    os << "graph chambers {\n";
    for (int c = 0; c < b.num_chambers(); ++c) os << "  c" << c << ";\n";
    for (int t = 0; t < b.num_types(); ++t)
      for (const auto& block : b.panels(t))
        for (std::size_t i = 0; i < block.size(); ++i)
          for (std::size_t j = i + 1; j < block.size(); ++j)
            os << "  c" << block[i] << " -- c" << block[j] << " [label=\"" << t << "\"];\n";
    os << "}\n";
    return os.str();
  }
  if (kind == "opposition_graph") {
    std::vector<bldg::SimplexRef> panels;
    for (int t = 0; t < b.num_types(); ++t)
      for (const auto& block : b.panels(t)) panels.push_back(make_simplex(b, block.front(), {t}));
    os << "graph opposition {\n";
    for (std::size_t k = 0; k < panels.size(); ++k)
      os << "  p" << k << " [label=\"type " << panels[k].cotype.front() << " chamber "
         << panels[k].chamber << "\"];\n";
    for (std::size_t i = 0; i < panels.size(); ++i)
      for (std::size_t j = i + 1; j < panels.size(); ++j)
        if (bldg::are_opposite(b, panels[i], panels[j])) os << "  p" << i << " -- p" << j << ";\n";
    os << "}\n";
    return os.str();
  }
  throw std::invalid_argument("unknown graph kind '" + kind + "'");
}

int cmd_export(const std::string& file, const std::string& kind, const std::string& dot) {
  auto g = bldg::geometry_from_json(load_json(file));
  auto b = bldg::building_from_geometry(g);
  std::string text = export_dot(b, kind);
  if (dot.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(dot);
    if (!out) throw std::invalid_argument("cannot write " + dot);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incidence geometries, their buildings, trees and cones"};
  app.require_subcommand(1);

  std::string file, panel, radius, dot, kind = "chamber_graph";
  bool as_json = false, classify = false;
  int bound = 4;

  auto add_common = [&](CLI::App* cmd, bool with_json = true) {
    cmd->add_option("file", file, "input JSON file")->required();
    if (with_json) cmd->add_flag("--json", as_json, "machine-readable output");
  };

  auto* c_build = app.add_subcommand("build", "validate a geometry and build its chamber system");
  add_common(c_build);
  auto* c_inspect = app.add_subcommand("inspect", "summarize a building");
  add_common(c_inspect);
  auto* c_proj = app.add_subcommand("proj", "projectivity group of a panel");
  add_common(c_proj);
  c_proj->add_option("--panel", panel, "panel selector TYPE:INDEX")->required();
  c_proj->add_option("--bound", bound, "closed path length bound");
  auto* c_rec = app.add_subcommand("reconstruct", "round-trip through the apartment complex");
  add_common(c_rec);
  auto* c_tree = app.add_subcommand("tree", "inspect a metric tree");
  add_common(c_tree);
  c_tree->add_flag("--classify", classify, "report the structure type");
  auto* c_cone = app.add_subcommand("cone", "cone over a building: apex report or wall tree");
  add_common(c_cone);
  c_cone->add_option("--panel", panel, "panel selector TYPE:INDEX");
  c_cone->add_option("--radius", radius, "truncation radius P/Q");
  auto* c_coarse = app.add_subcommand("coarse", "apartment-scale metric report of a tree");
  add_common(c_coarse);
  c_coarse->add_option("--radius", radius, "neighborhood radius P/Q");
  auto* c_export = app.add_subcommand("export", "export a building graph as DOT");
  add_common(c_export, false);
  c_export->add_option("--graph", kind, "chamber_graph or opposition_graph");
  c_export->add_option("--dot", dot, "output file (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(c_build)) return cmd_build(file, as_json);
    if (app.got_subcommand(c_inspect)) return cmd_inspect(file, as_json);
    if (app.got_subcommand(c_proj)) return cmd_proj(file, panel, bound, as_json);
    if (app.got_subcommand(c_rec)) return cmd_reconstruct(file, as_json);
    if (app.got_subcommand(c_tree)) return cmd_tree(file, classify, as_json);
    if (app.got_subcommand(c_cone)) return cmd_cone(file, panel, radius, as_json);
    if (app.got_subcommand(c_coarse)) return cmd_coarse(file, radius, as_json);
    if (app.got_subcommand(c_export)) return cmd_export(file, kind, dot);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return 2;
}
