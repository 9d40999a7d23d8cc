#include "ringel/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ringel/errors.hpp"

namespace ringel {
namespace {

std::size_t at(int i) { return static_cast<std::size_t>(i); }

EdgeList edges_from(const json& j) {
  EdgeList out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) throw InputError("edge entries must be [u, v] pairs");
    out.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  return out;
}

json edges_to(const EdgeList& es) {
  json out = json::array();
  for (auto [u, v] : es) out.push_back({u, v});
  return out;
}

// Strict integer token, so "1.5" or "x" is rejected rather than truncated.
bool parse_int(const std::string& s, long& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

std::vector<std::vector<std::string>> tokenized_lines(std::istream& is) {
  std::vector<std::vector<std::string>> out;
  std::string line;
  while (std::getline(is, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

// Sparse dumps of the n x n tables.
template <class T>
json sparse(const std::vector<T>& v, T blank) {
  json entries = json::array();
  for (std::size_t k = 0; k < v.size(); ++k)
    if (v[k] != blank) entries.push_back({k, v[k]});
  return {{"size", v.size()}, {"entries", entries}};
}
template <class T>
std::vector<T> dense(const json& j, T blank) {
  std::vector<T> out(j.at("size").get<std::size_t>(), blank);
  for (const auto& e : j.at("entries")) out.at(e[0].get<std::size_t>()) = e[1].get<T>();
  return out;
}

json book_to(const ReserveBook& b) {
  json out = json::array();
  for (std::size_t k = 0; k < b.names.size(); ++k) {
    json pairs = json::array();
    for (auto [x, y] : b.members[k]) pairs.push_back({x, y});
    out.push_back({{"name", b.names[k]}, {"pairs", pairs}});
  }
  return out;
}
ReserveBook book_from(const json& j) {
  ReserveBook b;
  for (const auto& e : j) {
    const int id = b.id(e.at("name").get<std::string>());
    for (const auto& p : e.at("pairs")) b.members[at(id)].emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  return b;
}

json intervals_to(const std::vector<std::vector<Interval>>& sets) {
  json out = json::array();
  for (const auto& s : sets) {
    json row = json::array();
    for (const auto& iv : s) row.push_back({iv.start, iv.length});
    out.push_back(row);
  }
  return out;
}
std::vector<std::vector<Interval>> intervals_from(const json& j) {
  std::vector<std::vector<Interval>> out;
  for (const auto& row : j) {
    out.emplace_back();
    for (const auto& iv : row) out.back().push_back({iv[0].get<int>(), iv[1].get<int>()});
  }
  return out;
}

Clock clock_from(const std::string& s) {
  for (int c = 0; c <= static_cast<int>(Clock::finished); ++c)
    if (s == to_string(static_cast<Clock>(c))) return static_cast<Clock>(c);
  throw InputError("unknown time marker '" + s + "'");
}

struct Field {
  const char* name;
  double ParamConfig::* real = nullptr;
  int ParamConfig::* whole = nullptr;
};

const std::vector<Field>& fields() {
  static const std::vector<Field> f = {
      {"n", nullptr, &ParamConfig::n},
      {"p", &ParamConfig::p},
      {"xi", &ParamConfig::xi},
      {"xi_prime", &ParamConfig::xi_prime},
      {"c", &ParamConfig::c},
      {"c_prime", &ParamConfig::c_prime},
      {"Delta", &ParamConfig::Delta},
      {"Lambda", &ParamConfig::Lambda},
      {"D", &ParamConfig::D},
      {"delta", &ParamConfig::delta},
      {"p_min", &ParamConfig::p_min},
      {"p_max", &ParamConfig::p_max},
      {"eps", &ParamConfig::eps},
      {"p0", &ParamConfig::p0},
      {"eta_minus", &ParamConfig::eta_minus},
      {"p_minus", &ParamConfig::p_minus},
      {"eta_plus", &ParamConfig::eta_plus},
      {"p_plus", &ParamConfig::p_plus},
      {"K", nullptr, &ParamConfig::K},
      {"d", nullptr, &ParamConfig::d},
      {"s", nullptr, &ParamConfig::s},
      {"bite", &ParamConfig::bite},
      {"rounds", nullptr, &ParamConfig::rounds},
      {"match_steps_factor", &ParamConfig::match_steps_factor},
      {"walk_budget_factor", &ParamConfig::walk_budget_factor},
      {"p_ex_prime_factor", &ParamConfig::p_ex_prime_factor},
  };
  return f;
}

}  // namespace

json to_json(const Graph& g) { return {{"n", g.n()}, {"edges", edges_to(g.edges())}}; }

Graph graph_from_json(const json& j) {
  try {
    return Graph::from_edges(j.at("n").get<int>(), edges_from(j.at("edges")));
  } catch (const json::exception& e) {
    throw InputError(std::string("graph JSON: ") + e.what());
  }
}

Graph read_edge_list(std::istream& is) {
  int n = -1, top = -1;
  EdgeList es;
  for (const auto& toks : tokenized_lines(is)) {
    long a = 0, b = 0;
    if (toks.size() == 1 && parse_int(toks[0], a) && n < 0 && es.empty()) {
      n = static_cast<int>(a);
      continue;
    }
    if (toks.size() != 2 || !parse_int(toks[0], a) || !parse_int(toks[1], b))
      throw InputError("edge list: expected 'u v', got '" + toks[0] + (toks.size() > 1 ? " " + toks[1] : "") + "'");
    es.emplace_back(static_cast<int>(a), static_cast<int>(b));
    top = std::max({top, static_cast<int>(a), static_cast<int>(b)});
  }
  return Graph::from_edges(n >= 0 ? n : top + 1, es);
}

void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.n() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

json to_json(const Tree& t) { return {{"n", t.size()}, {"edges", edges_to(t.edges())}}; }

Tree tree_from_json(const json& j) {
  try {
    if (j.contains("parents")) return Tree::from_parents(j.at("parents").get<std::vector<int>>());
    return Tree::from_edges(j.at("n").get<int>(), edges_from(j.at("edges")));
  } catch (const json::exception& e) {
    throw InputError(std::string("tree JSON: ") + e.what());
  }
}

Tree read_parent_array(std::istream& is) {
  std::vector<int> parent;
  for (const auto& toks : tokenized_lines(is))
    for (const auto& tok : toks) {
      long v = 0;
      if (!parse_int(tok, v)) throw InputError("parent array: '" + tok + "' is not an integer");
      parent.push_back(static_cast<int>(v));
    }
  return Tree::from_parents(parent);
}

json to_json(const Decomposition& d) {
  json copies = json::array();
  for (const auto& c : d.copies) copies.push_back({{"map", c}});
  return {{"host", to_json(d.host)}, {"tree", to_json(d.tree)}, {"copies", copies}};
}

Decomposition decomposition_from_json(const json& j) {
  try {
    Decomposition d{graph_from_json(j.at("host")), tree_from_json(j.at("tree")), {}};
    for (const auto& c : j.at("copies")) d.copies.push_back(c.at("map").get<std::vector<int>>());
    return d;
  } catch (const json::exception& e) {
    throw InputError(std::string("decomposition JSON: ") + e.what());
  }
}

json to_json(const Digraph& d) {
  json arcs = json::array();
  for (const auto& a : d.arcs()) {
    json e = {{"from", a.from}, {"to", a.to}};
    if (!a.label.empty()) e["label"] = a.label;
    arcs.push_back(e);
  }
  return {{"n", d.n()}, {"arcs", arcs}};
}

void write_dot(std::ostream& os, const Digraph& d) {
  os << "digraph G {\n";
  for (int v = 0; v < d.n(); ++v) os << "  " << v << ";\n";
  for (const auto& a : d.arcs()) {
    os << "  " << a.from << " -> " << a.to;
    if (!a.label.empty()) os << " [label=\"" << a.label << "\"]";
    os << ";\n";
  }
  os << "}\n";
}

json to_json(const TreePartition& tp) {
  json layers = json::array();
  for (std::size_t i = 0; i < tp.layers.size(); ++i) {
    const auto& cl = tp.classes[i];
    layers.push_back({{"vertices", tp.layers[i]}, {"hi", cl.hi}, {"lo", cl.lo}, {"no", cl.no}});
  }
  json stars = json::array();
  for (const auto& s : tp.ex_stars) stars.push_back({{"center", s.center}, {"leaves", s.leaves}});
  return {{"case", to_string(tp.kind)},
          {"a_star", tp.a_star},
          {"a_star_star", tp.a_star_star},
          {"a0_prime", tp.a0_prime},
          {"a0", tp.a0},
          {"layers", layers},
          {"i_star", tp.i_star},
          {"removed_edges", edges_to(tp.p_ex)},
          {"removed_stars", stars},
          {"removed_paths", tp.ex_paths},
          {"removed_leaves", edges_to(tp.ex_leaf_edges)},
          {"order", tp.order}};
}

json to_json(const BipartiteInstance& b) {
  return {{"x_size", b.x_size}, {"y_size", b.y_size}, {"b", edges_to(b.b)}, {"z", edges_to(b.z)}};
}

BipartiteInstance bipartite_from_json(const json& j) {
  try {
    BipartiteInstance b;
    b.x_size = j.at("x_size").get<int>();
    b.y_size = j.at("y_size").get<int>();
    b.b = edges_from(j.at("b"));
    if (j.contains("z")) b.z = edges_from(j.at("z"));
    b.validate();
    return b;
  } catch (const json::exception& e) {
    throw InputError(std::string("bipartite JSON: ") + e.what());
  }
}

json to_json(const WeightedHypergraph& h) {
  json edges = json::array();
  for (const auto& e : h.edges()) edges.push_back({{"verts", e.verts}, {"w", e.w}});
  return {{"r", h.rank()}, {"vertices", h.vertices()}, {"edges", edges}};
}

WeightedHypergraph hypergraph_from_json(const json& j) {
  try {
    WeightedHypergraph h(j.at("vertices").get<int>(), j.at("r").get<int>());
    for (const auto& e : j.at("edges")) h.add_edge(e.at("verts").get<std::vector<int>>(), e.at("w").get<double>());
    return h;
  } catch (const json::exception& e) {
    throw InputError(std::string("hypergraph JSON: ") + e.what());
  }
}

json to_json(const ParamConfig& cfg) {
  json out = json::object();
  for (const auto& f : fields()) {
    if (f.real) out[f.name] = cfg.*(f.real);
    else out[f.name] = cfg.*(f.whole);
  }
  return out;
}

void apply_config(ParamConfig& cfg, const json& layer) {
  if (!layer.is_object()) throw ConfigError("configuration must be a JSON object");
  bool rederive = false;
  for (const auto& [key, value] : layer.items()) {
    auto it = std::find_if(fields().begin(), fields().end(), [&](const Field& f) { return key == f.name; });
    if (it == fields().end()) throw ConfigError("unknown configuration key '" + key + "'");
    if (!value.is_number()) throw ConfigError("configuration key '" + key + "' needs a number");
    if (it->whole) {
      if (!value.is_number_integer()) throw ConfigError("configuration key '" + key + "' needs an integer");
      cfg.*(it->whole) = value.get<int>();
    } else {
      cfg.*(it->real) = value.get<double>();
    }
    rederive = rederive || key == "n" || key == "c" || key == "eps";
  }
  if (rederive) {
    cfg.derive();
    for (const char* keep : {"Delta", "Lambda", "d"})
      if (layer.contains(keep)) apply_config(cfg, json{{keep, layer.at(keep)}});
  } else if (layer.contains("eps") || cfg.eps_i.empty()) {
    cfg.derive();
  }
}

void apply_assignment(ParamConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    throw ConfigError("value for '" + key + "' is not a number: '" + text + "'");
  }
  apply_config(cfg, json{{key, value}});
}

json snapshot(const EmbeddingState& st) {
  const auto& emb = st.emb;
  json copies = json::array();
  for (int w = 0; w < emb.n(); ++w) {
    std::vector<int> row(at(emb.tree().size()));
    for (int u = 0; u < emb.tree().size(); ++u) row[at(u)] = emb.image(w, u);
    copies.push_back(row);
  }
  std::vector<int> labels(at(st.order.n()));
  for (int v = 0; v < st.order.n(); ++v) labels[at(v)] = st.order.label(v);
  json shift = json::array();
  for (auto [a, x] : st.shift) shift.push_back({a, x});
  json twist_main = json::array(), twist_pred = json::array();
  for (auto [x, y] : st.twist_main) twist_main.push_back({x, y});
  for (auto [x, y] : st.twist_pred) twist_pred.push_back({x, y});
  json metrics = json::array();
  for (const auto& m : st.metrics) metrics.push_back({m.clock, m.layer, m.name, m.value});

  return {{"version", 1},
          {"config", to_json(st.cfg)},
          {"case", to_string(st.tp.kind)},
          {"host", to_json(emb.host())},
          {"tree", to_json(emb.tree())},
          {"clock", to_string(st.clock)},
          {"layer", st.layer},
          {"order", labels},
          {"copies", copies},
          {"shift", shift},
          {"n0", st.n0},
          {"n_star", st.n_star},
          {"v_block", st.v_block},
          {"w_block", st.w_block},
          {"interval_i", st.interval_i},
          {"interval_j", st.interval_j},
          {"x_sets", intervals_to(st.x_sets)},
          {"y_sets", intervals_to(st.y_sets)},
          {"t_min", st.t_min},
          {"intervals_degenerate", st.intervals_degenerate},
          {"xbar", sparse<char>(st.xbar, 0)},
          {"pbar", st.pbar},
          {"u_part", st.u_part},
          {"g1", sparse<char>(st.g1, 0)},
          {"arcs", book_to(st.arcs)},
          {"jpairs", book_to(st.jpairs)},
          {"arc_label", sparse<int>(st.arc_label, -1)},
          {"j_label", sparse<int>(st.j_label, -1)},
          {"hstar_w", sparse<int>(st.hstar_w, -1)},
          {"hstar_centre", sparse<int>(st.hstar_centre, -1)},
          {"hi_xw", sparse<char>(st.hi_xw, 0)},
          {"twist_main", twist_main},
          {"twist_pred", twist_pred},
          {"rainbow_deficit", st.rainbow_deficit},
          {"nibble_labels", st.nibble_labels},
          {"p1", st.p1},
          {"p_ex", st.p_ex},
          {"p_ex_prime", st.p_ex_prime},
          {"alpha_hi", st.alpha_hi},
          {"pair_prob", st.pair_prob},
          {"class_alpha", st.class_alpha},
          {"table_arc_sum", st.table_arc_sum},
          {"table_pair_sum", st.table_pair_sum},
          {"metrics", metrics}};
}

EmbeddingState restore(const json& j) {
  try {
    if (j.at("version").get<int>() != 1) throw InputError("snapshot: unsupported version");
    ParamConfig cfg = ParamConfig::desk(j.at("host").at("n").get<int>(), 0.5);
    apply_config(cfg, j.at("config"));
    const Graph host = graph_from_json(j.at("host"));
    const Tree tree = tree_from_json(j.at("tree"));
    const auto tag = classify_case(tree, cfg);
    if (j.at("case").get<std::string>() != to_string(tag.kind)) throw InputError("snapshot: case tag does not match the tree");

    EmbeddingState st;
    st.cfg = cfg;
    if (tag.kind != TreeCase::L) {
      st.tp = tree_partition(tree, tag, cfg);
      st.labels = label_scheme(st.tp, cfg);
    } else {
      st.tp.kind = TreeCase::L;
    }
    st.order = CyclicOrder::from_labels(j.at("order").get<std::vector<int>>());
    st.emb = Embeddings(host, tree);
    const int n = host.n();
    const auto& copies = j.at("copies");
    for (int w = 0; w < n; ++w) {
      const auto row = copies.at(at(w)).get<std::vector<int>>();
      for (int u = 0; u < tree.size(); ++u)
        if (row.at(at(u)) >= 0) st.emb.place(w, u, row[at(u)]);
    }
    st.clock = clock_from(j.at("clock").get<std::string>());
    st.layer = j.at("layer").get<int>();
    for (const auto& e : j.at("shift")) st.shift[e[0].get<int>()] = e[1].get<int>();
    st.n0 = j.at("n0").get<int>();
    st.n_star = j.at("n_star").get<int>();
    st.v_block = j.at("v_block").get<std::vector<int>>();
    st.w_block = j.at("w_block").get<std::vector<int>>();
    st.interval_i = j.at("interval_i").get<std::vector<int>>();
    st.interval_j = j.at("interval_j").get<std::vector<int>>();
    st.x_sets = intervals_from(j.at("x_sets"));
    st.y_sets = intervals_from(j.at("y_sets"));
    st.t_min = j.at("t_min").get<std::vector<long>>();
    st.intervals_degenerate = j.at("intervals_degenerate").get<bool>();
    st.xbar = dense<char>(j.at("xbar"), 0);
    st.pbar = j.at("pbar").get<std::vector<double>>();
    st.u_part = j.at("u_part").get<std::vector<int>>();
    st.g1 = dense<char>(j.at("g1"), 0);
    st.arcs = book_from(j.at("arcs"));
    st.jpairs = book_from(j.at("jpairs"));
    st.arc_label = dense<int>(j.at("arc_label"), -1);
    st.j_label = dense<int>(j.at("j_label"), -1);
    st.hstar_w = dense<int>(j.at("hstar_w"), -1);
    st.hstar_centre = dense<int>(j.at("hstar_centre"), -1);
    st.hi_xw = dense<char>(j.at("hi_xw"), 0);
    for (const auto& e : j.at("twist_main")) st.twist_main.emplace_back(e[0].get<int>(), e[1].get<int>());
    for (const auto& e : j.at("twist_pred")) st.twist_pred.emplace_back(e[0].get<int>(), e[1].get<int>());
    st.rainbow_deficit = j.at("rainbow_deficit").get<long>();
    st.nibble_labels = j.at("nibble_labels").get<std::size_t>();
    st.p1 = j.at("p1").get<double>();
    st.p_ex = j.at("p_ex").get<double>();
    st.p_ex_prime = j.at("p_ex_prime").get<double>();
    st.alpha_hi = j.at("alpha_hi").get<double>();
    st.pair_prob = j.at("pair_prob").get<std::map<std::string, double>>();
    st.class_alpha = j.at("class_alpha").get<std::map<std::string, double>>();
    st.table_arc_sum = j.at("table_arc_sum").get<double>();
    st.table_pair_sum = j.at("table_pair_sum").get<double>();
    for (const auto& m : j.at("metrics"))
      st.metrics.push_back({m[0].get<std::string>(), m[1].get<int>(), m[2].get<std::string>(), m[3].get<double>()});
    return st;
  } catch (const json::exception& e) {
    throw InputError(std::string("snapshot: ") + e.what());
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, p);
}

void write_metrics_csv(std::ostream& os, const std::vector<Metric>& metrics, bool header) {
  if (header) os << "time,layer,metric,value\n";
  for (const auto& m : metrics) os << m.clock << ',' << m.layer << ',' << m.name << ',' << format_number(m.value) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

}  // namespace ringel
