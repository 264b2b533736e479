#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chronolex/mds.hpp"
#include "chronolex/temporal.hpp"
#include "chronolex/trajectory.hpp"

namespace chronolex {

inline constexpr std::size_t kMaxQueryWords = 32;

struct QueryRequest {
  std::vector<std::string> words;
  std::optional<GridSize> grid;
  bool include_frames = false;
  double margin = kDefaultMargin;
  /// Scale every temporal vector to unit length before computing distances.
  bool normalize = false;
};

/// Splits "a,b,c" into words, trimming surrounding whitespace.
std::vector<std::string> split_word_list(std::string_view csv);

/// Throws Errc::EmptyQuery, Errc::DuplicateWord or Errc::InvalidQuery.
void validate_request(const QueryRequest& request);

struct QueryDiagnostics {
  std::vector<double> eigenvalues;
  double min_eigenvalue = 0.0;
  double stress = 0.0;
  double stress_unordered = 0.0;
  std::size_t excluded_points = 0;
};

struct QueryResponse {
  std::vector<std::string> words;
  std::vector<std::string> slice_labels;
  GridSize grid;
  /// points[word][slice]; nullopt marks a slice without data.
  std::vector<std::vector<std::optional<GridPoint>>> points;
  std::vector<Trajectory> trajectories;  // empty unless include_frames
  QueryDiagnostics diagnostics;
};

/// Collects the query's temporal vectors into labeled points (word-major,
/// present points only) and the list of missing keys.
std::vector<LabeledPoint> gather_points(const TemporalIndex& index,
                                        const std::vector<std::string>& words, bool normalize,
                                        std::vector<PointKey>* missing = nullptr);

/// Full pipeline: gather, distance matrix, classical MDS, quantize, rasterize.
/// Throws Errc::AllPointsMissing when no query word has any data.
QueryResponse run_query(const TemporalIndex& index, const QueryRequest& request);

nlohmann::ordered_json to_json(const QueryResponse& response);
/// Compact serialization shared by the CLI and the HTTP endpoint.
std::string to_json_body(const QueryResponse& response);

/// word,slice,label,x,y rows; x and y empty for missing points.
void write_csv(std::ostream& out, const QueryResponse& response);

/// Polyline through each word's keyframes with one marker per slice.
void write_svg(std::ostream& out, const QueryResponse& response);

nlohmann::ordered_json index_meta(const TemporalIndex& index);

}  // namespace chronolex
