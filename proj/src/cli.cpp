#include "chronolex/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <optional>
#include <vector>

#include "chronolex/corpus.hpp"
#include "chronolex/embedding_store.hpp"
#include "chronolex/error.hpp"
#include "chronolex/http_server.hpp"
#include "chronolex/mds.hpp"
#include "chronolex/service.hpp"
#include "chronolex/temporal.hpp"

namespace chronolex {

namespace {

struct IngestOptions {
  std::vector<std::string> ngrams;
  std::string embeddings;
  std::string unknown_token;
  std::string op = "sum";
  int order = 5;
  TimeSliceConfig slices;
  std::string on_error = "skip";
  std::string out;
};

struct QueryOptions {
  std::string index;
  std::string words;
  std::string format = "json";
  bool frames = false;
  bool normalize = false;
  int width = GridSize{}.width;
  int height = GridSize{}.height;
  double margin = kDefaultMargin;
};

struct ServeOptions {
  std::string index;
  std::string address;
  std::string ui_dir;
};

int run_ingest(const IngestOptions& o, std::ostream& err) {
  const auto table = load_static_embeddings_file(
      o.embeddings, o.unknown_token.empty() ? std::nullopt : std::optional(o.unknown_token));
  std::vector<std::unique_ptr<LineSource>> sources;
  for (const auto& path : o.ngrams) sources.push_back(open_line_source(path));
  CorpusStream stream(std::move(sources), o.order, o.slices,
                      o.on_error == "abort" ? ErrorPolicy::abort : ErrorPolicy::skip);
  const auto index =
      build_temporal_index(stream, table, parse_context_operator(o.op), o.slices, o.order);
  save_index(index, o.out);

  const auto& s = stream.summary();
  err << "ingested " << s.records << " records from " << s.lines << " lines ("
      << s.malformed << " malformed, " << s.out_of_range << " out of range); "
      << index.entry_count() << " entries over " << index.vocabulary_size() << " words written to "
      << o.out << '\n';
  return kExitOk;
}

QueryRequest make_request(const QueryOptions& o) {
  QueryRequest q;
  q.words = split_word_list(o.words);
  q.include_frames = o.frames;
  q.normalize = o.normalize;
  q.grid = GridSize{o.width, o.height};
  q.margin = o.margin;
  return q;
}

int run_query_cmd(const QueryOptions& o, std::ostream& out) {
  const auto index = load_index(o.index);
  const auto response = run_query(index, make_request(o));
  if (o.format == "csv")
    write_csv(out, response);
  else if (o.format == "svg")
    write_svg(out, response);
  else
    out << to_json_body(response) << '\n';
  return kExitOk;
}

int run_export(const QueryOptions& o, std::ostream& out) {
  const auto index = load_index(o.index);
  const QueryRequest q = make_request(o);
  validate_request(q);
  const auto points = gather_points(index, q.words, q.normalize);
  if (points.empty())
    throw Error(Errc::AllPointsMissing, "none of the query words has data in any time slice");
  write_distance_tsv(out, distance_matrix(points), q.words);
  return kExitOk;
}

int run_serve(const ServeOptions& o, std::ostream& err) {
  std::string addr_text = o.address;
  if (addr_text.empty()) {
    if (const char* env = std::getenv(kAddressEnvVar); env && *env) addr_text = env;
  }
  const ServeAddress addr = addr_text.empty() ? ServeAddress{} : parse_address(addr_text);
  const auto index = load_index(o.index);
  ProjectionServer server(index, o.ui_dir.empty() ? std::nullopt
                                                  : std::optional<std::filesystem::path>(o.ui_dir));
  const int port = server.bind(addr.host, addr.port);
  err << "serving " << o.index << " on http://" << addr.host << ':' << port << '/' << std::endl;
  server.listen();
  return kExitOk;
}

bool is_usage_error(Errc code) {
  return code == Errc::EmptyQuery || code == Errc::DuplicateWord || code == Errc::InvalidQuery ||
         code == Errc::InvalidArgument;
}

void add_query_options(CLI::App& cmd, QueryOptions& o) {
  cmd.add_option("--index", o.index, "Index directory written by ingest")->required();
  cmd.add_option("--words", o.words, "Comma-separated query words")->required();
  cmd.add_flag("--normalize", o.normalize, "Scale temporal vectors to unit length first");
}

}  // namespace

int cli_main(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"chronolex: temporal word embeddings and their 2D trajectories", "chronolex"};
  app.require_subcommand(1);

  IngestOptions ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Build an index from n-grams and embeddings");
  ingest_cmd->add_option("--ngrams", ingest.ngrams, "N-gram TSV files (optionally gzipped)")
      ->required()
      ->expected(1, -1);
  ingest_cmd->add_option("--embeddings", ingest.embeddings, "Static embedding text file")->required();
  ingest_cmd->add_option("--unknown-token", ingest.unknown_token,
                         "Entry used for out-of-vocabulary words");
  ingest_cmd->add_option("--operator", ingest.op, "Context operator")
      ->check(CLI::IsMember({"sum", "concat"}))
      ->capture_default_str();
  ingest_cmd->add_option("--order", ingest.order, "N-gram order (odd)")->capture_default_str();
  ingest_cmd->add_option("--slice-start", ingest.slices.start_year)->capture_default_str();
  ingest_cmd->add_option("--slice-end", ingest.slices.end_year)->capture_default_str();
  ingest_cmd->add_option("--slice-width", ingest.slices.width_years)->capture_default_str();
  ingest_cmd->add_option("--on-error", ingest.on_error, "Bad line policy")
      ->check(CLI::IsMember({"skip", "abort"}))
      ->capture_default_str();
  ingest_cmd->add_option("--out", ingest.out, "Output index directory")->required();

  QueryOptions query;
  auto* query_cmd = app.add_subcommand("query", "Project query words and print the result");
  add_query_options(*query_cmd, query);
  query_cmd->add_option("--format", query.format)
      ->check(CLI::IsMember({"json", "csv", "svg"}))
      ->capture_default_str();
  query_cmd->add_flag("--frames", query.frames, "Include rasterized trajectories");
  query_cmd->add_option("--width", query.width)->capture_default_str();
  query_cmd->add_option("--height", query.height)->capture_default_str();
  query_cmd->add_option("--margin", query.margin)->capture_default_str();

  QueryOptions exp;
  auto* export_cmd = app.add_subcommand("export-distances", "Print the distance matrix as TSV");
  add_query_options(*export_cmd, exp);

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API and UI");
  serve_cmd->add_option("--index", serve.index, "Index directory")->required();
  serve_cmd->add_option("--address", serve.address,
                        std::string("host:port (default 127.0.0.1:8080, or $") + kAddressEnvVar + ")");
  serve_cmd->add_option("--ui-dir", serve.ui_dir, "Directory with the static UI bundle");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("chronolex");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) return run_ingest(ingest, err);
    if (*query_cmd) return run_query_cmd(query, out);
    if (*export_cmd) return run_export(exp, out);
    if (*serve_cmd) return run_serve(serve, err);
  } catch (const Error& e) {
    err << "error [" << errc_name(e.code()) << "]: " << e.what() << '\n';
    return is_usage_error(e.code()) ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace chronolex
