#include "chronolex/service.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <set>

#include "chronolex/error.hpp"

namespace chronolex {

std::vector<std::string> split_word_list(std::string_view csv) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = csv.find(',', start);
    std::string_view item = csv.substr(start, pos == std::string_view::npos ? pos : pos - start);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front())))
      item.remove_prefix(1);
    while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back())))
      item.remove_suffix(1);
    out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (out.size() == 1 && out.front().empty()) out.clear();
  return out;
}

void validate_request(const QueryRequest& request) {
  if (request.words.empty()) throw Error(Errc::EmptyQuery, "query has no words");
  if (request.words.size() > kMaxQueryWords)
    throw Error(Errc::InvalidQuery, "query has " + std::to_string(request.words.size()) +
                                        " words; at most " + std::to_string(kMaxQueryWords) +
                                        " are allowed");
  std::set<std::string_view> seen;
  for (const auto& w : request.words) {
    bool blank = true;
    for (char c : w)
      if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
    if (blank) throw Error(Errc::EmptyQuery, "query contains a blank word");
    if (!seen.insert(w).second) throw Error(Errc::DuplicateWord, "duplicate query word '" + w + "'");
  }
  if (request.grid && (request.grid->width < 2 || request.grid->height < 2))
    throw Error(Errc::InvalidQuery, "grid must be at least 2x2");
  if (!(request.margin >= 0.0 && request.margin < 0.5))
    throw Error(Errc::InvalidQuery, "margin must be in [0, 0.5)");
}

std::vector<LabeledPoint> gather_points(const TemporalIndex& index,
                                        const std::vector<std::string>& words, bool normalize,
                                        std::vector<PointKey>* missing) {
  std::vector<LabeledPoint> points;
  const int slices = index.slice_count();
  for (int w = 0; w < static_cast<int>(words.size()); ++w) {
    for (int t = 0; t < slices; ++t) {
      auto v = index.vector(t, words[static_cast<std::size_t>(w)]);
      if (!v) {
        if (missing) missing->push_back({w, t});
        continue;
      }
      LabeledPoint p{{w, t}, std::vector<double>(v->begin(), v->end())};
      if (normalize) {
        double norm = 0.0;
        for (double x : p.vector) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 0.0)
          for (double& x : p.vector) x /= norm;
      }
      points.push_back(std::move(p));
    }
  }
  return points;
}

QueryResponse run_query(const TemporalIndex& index, const QueryRequest& request) {
  validate_request(request);
  const int k = static_cast<int>(request.words.size());
  const int slices = index.slice_count();

  QueryResponse resp;
  resp.words = request.words;
  resp.grid = request.grid.value_or(GridSize{});
  for (int t = 0; t < slices; ++t) resp.slice_labels.push_back(index.config().slice_label(t));

  std::vector<PointKey> missing;
  auto points = gather_points(index, request.words, request.normalize, &missing);
  if (points.empty())
    throw Error(Errc::AllPointsMissing, "none of the query words has data in any time slice");

  const DistanceMatrix a = distance_matrix(points);
  ProjectionResult proj = classical_mds(a, 2);
  proj.missing = missing;

  const auto grid_points = quantize(proj.planar_coords(), resp.grid, request.margin);
  resp.points.assign(static_cast<std::size_t>(k),
                     std::vector<std::optional<GridPoint>>(static_cast<std::size_t>(slices)));
  for (const auto& [key, g] : grid_points)
    resp.points[static_cast<std::size_t>(key.word_index)][static_cast<std::size_t>(key.slice_index)] = g;

  if (request.include_frames) resp.trajectories = build_trajectories(grid_points, k, slices);

  resp.diagnostics.eigenvalues = proj.eigenvalues;
  resp.diagnostics.min_eigenvalue = proj.min_eigenvalue;
  resp.diagnostics.stress = proj.stress;
  resp.diagnostics.stress_unordered = 0.5 * proj.stress;
  resp.diagnostics.excluded_points = missing.size();
  return resp;
}

namespace {

nlohmann::ordered_json point_json(const GridPoint& p) { return nlohmann::ordered_json::array({p.x, p.y}); }

}  // namespace

nlohmann::ordered_json to_json(const QueryResponse& r) {
  using json = nlohmann::ordered_json;
  json points = json::array();
  for (const auto& row : r.points) {
    json jr = json::array();
    for (const auto& p : row) jr.push_back(p ? point_json(*p) : json(nullptr));
    points.push_back(std::move(jr));
  }

  json trajectories = nullptr;
  if (!r.trajectories.empty()) {
    trajectories = json::array();
    for (const auto& t : r.trajectories) {
      json slices = json::array(), keys = json::array(), frames = json::array();
      for (const auto& kf : t.keyframes) {
        slices.push_back(kf.slice_index);
        keys.push_back(point_json(kf.point));
      }
      for (const auto& f : t.frames) frames.push_back(point_json(f));
      trajectories.push_back({{"word", r.words[static_cast<std::size_t>(t.word_index)]},
                              {"empty", t.empty()},
                              {"keyframe_slices", std::move(slices)},
                              {"keyframes", std::move(keys)},
                              {"frames", std::move(frames)},
                              {"segment_offsets", t.segment_offsets}});
    }
  }

  return json{{"words", r.words},
              {"slice_labels", r.slice_labels},
              {"grid", {{"width", r.grid.width}, {"height", r.grid.height}}},
              {"points", std::move(points)},
              {"trajectories", std::move(trajectories)},
              {"diagnostics",
               {{"eigenvalues", r.diagnostics.eigenvalues},
                {"min_eigenvalue", r.diagnostics.min_eigenvalue},
                {"stress", r.diagnostics.stress},
                {"stress_unordered", r.diagnostics.stress_unordered},
                {"excluded_points", r.diagnostics.excluded_points}}}};
}

std::string to_json_body(const QueryResponse& response) { return to_json(response).dump(); }

void write_csv(std::ostream& out, const QueryResponse& r) {
  out << "word,slice,label,x,y\n";
  for (std::size_t w = 0; w < r.points.size(); ++w) {
    for (std::size_t t = 0; t < r.points[w].size(); ++t) {
      out << r.words[w] << ',' << t << ',' << r.slice_labels[t] << ',';
      if (const auto& p = r.points[w][t]) out << p->x << ',' << p->y;
      else out << ',';
      out << '\n';
    }
  }
}

namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                                  "#bcbd22", "#17becf"};

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& out, const QueryResponse& r) {
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << r.grid.width << "\" height=\""
      << r.grid.height << "\" viewBox=\"0 0 " << r.grid.width << ' ' << r.grid.height
      << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t w = 0; w < r.points.size(); ++w) {
    const char* color = kPalette[w % kPalette.size()];
    const std::string word = xml_escape(r.words[w]);
    out << "<g class=\"word\" data-word=\"" << word << "\">\n<polyline fill=\"none\" stroke=\""
        << color << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& p : r.points[w]) {
      if (!p) continue;
      out << (first ? "" : " ") << p->x << ',' << p->y;
      first = false;
    }
    out << "\"/>\n";
    const GridPoint* label_at = nullptr;
    for (std::size_t t = 0; t < r.points[w].size(); ++t) {
      const auto& p = r.points[w][t];
      if (!p) continue;
      if (!label_at) label_at = &*p;
      out << "<circle cx=\"" << p->x << "\" cy=\"" << p->y << "\" r=\"4\" fill=\"" << color
          << "\"><title>" << word << ' ' << xml_escape(r.slice_labels[t]) << "</title></circle>\n";
    }
    if (label_at)
      out << "<text x=\"" << label_at->x + 6 << "\" y=\"" << label_at->y - 6
          << "\" font-family=\"sans-serif\" font-size=\"14\" fill=\"" << color << "\">" << word
          << "</text>\n";
    out << "</g>\n";
  }
  out << "</svg>\n";
}

nlohmann::ordered_json index_meta(const TemporalIndex& index) {
  using json = nlohmann::ordered_json;
  json labels = json::array();
  for (int t = 0; t < index.slice_count(); ++t) labels.push_back(index.config().slice_label(t));
  return json{{"format_version", kIndexFormatVersion},
              {"operator", to_string(index.op())},
              {"n", index.n()},
              {"dim", index.dim()},
              {"dim_out", index.dim_out()},
              {"slice_config",
               {{"start_year", index.config().start_year},
                {"end_year", index.config().end_year},
                {"width_years", index.config().width_years}}},
              {"slice_count", index.slice_count()},
              {"slice_labels", std::move(labels)},
              {"entry_count", index.entry_count()},
              {"vocabulary_size", index.vocabulary_size()}};
}

}  // namespace chronolex
