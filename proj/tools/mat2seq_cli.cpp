// mat2seq command-line tool: encode, decode, verify, dataset, generate, vocab.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "mat2seq/mat2seq.hpp"

namespace fs = std::filesystem;
using namespace mat2seq;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

double default_symprec() {
  if (const char* env = std::getenv("MAT2SEQ_SYMPREC")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0)) throw UsageError("MAT2SEQ_SYMPREC must be a positive number");
    return v;
  }
  return kDefaultSymprec;
}

struct InputFile {
  fs::path path;
  fs::path relative;  // relative to the input root; file name for single files
  std::string id;     // relative path without extension, '/'-separated
};

/// CIF files under `input`, sorted by relative path.
std::vector<InputFile> collect_cifs(const fs::path& input) {
  std::vector<InputFile> files;
  if (fs::is_directory(input)) {
    for (const auto& entry : fs::recursive_directory_iterator(input)) {
      if (!entry.is_regular_file() || entry.path().extension() != ".cif") continue;
      const fs::path rel = fs::relative(entry.path(), input);
      files.push_back({entry.path(), rel, fs::path(rel).replace_extension().generic_string()});
    }
  } else {
    files.push_back({input, input.filename(), input.stem().string()});
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  return files;
}

// ---- encode ----

struct EncodeArgs {
  std::string input, out;
  double symprec = 0;
  std::vector<std::string> props;
  double prop_width = 0;
};

int run_encode(const EncodeArgs& args) {
  CanonicalizeOptions options;
  options.symprec = args.symprec;
  std::vector<std::pair<std::string, int>> bins;
  if (!args.props.empty() && !(args.prop_width > 0)) throw UsageError("--prop requires a positive --prop-width");
  for (const auto& p : args.props) {
    const auto eq = p.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--prop expects name=value, got '" + p + "'");
    double value = 0;
    try {
      std::size_t used = 0;
      value = std::stod(p.substr(eq + 1), &used);
      if (used != p.size() - eq - 1) throw std::invalid_argument(p);
    } catch (const std::logic_error&) {
      throw UsageError("--prop value is not a number: '" + p + "'");
    }
    try {
      bins.emplace_back(p.substr(0, eq), bin_property(value, args.prop_width));
    } catch (const Error& e) {
      throw UsageError(std::string("--prop ") + p + ": " + e.what());
    }
  }
  if (bins.size() > static_cast<std::size_t>(kPropertySlots)) throw UsageError("at most 10 --prop values");

  const fs::path input(args.input);
  const bool dir_mode = fs::is_directory(input);
  const auto files = collect_cifs(input);
  std::vector<std::string> texts(files.size()), errors(files.size());
  detail::parallel_for(files.size(), [&](std::size_t i) {
    try {
      texts[i] = encode(canonicalize(parse_cif(read_file(files[i].path)), options), bins).text;
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  int failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty()) {
      std::cerr << files[i].path.string() << ": " << errors[i] << "\n";
      ++failed;
      continue;
    }
    const fs::path target =
        dir_mode ? fs::path(args.out) / fs::path(files[i].relative).replace_extension(".seq") : fs::path(args.out);
    write_file(target, texts[i]);
  }
  if (dir_mode) std::cerr << "encoded " << files.size() - failed << " of " << files.size() << " files\n";
  return failed ? kExitPartial : kExitOk;
}

// ---- decode ----

int run_decode(const std::string& input, const std::string& out) {
  try {
    write_file(out, write_cif(decode(read_file(input))));
  } catch (const ParseError& e) {
    std::cerr << input << ":" << e.line() << ":" << e.column() << ": " << e.what() << "\n";
    return kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string input, transforms = "rotate,translate,shift_boundary,reexpress_lattice,permute_atoms", report;
  int trials = 10;
  std::uint64_t seed = 0;
  double symprec = 0;
  bool mutate = false;
};

std::vector<TransformKind> parse_transform_list(const std::string& list) {
  std::vector<TransformKind> kinds;
  if (list == "none" || list.empty()) return kinds;
  std::stringstream ss(list);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto kind = parse_transform_kind(name);
    if (!kind) throw UsageError("unknown transform '" + name + "'");
    kinds.push_back(*kind);
  }
  return kinds;
}

/// Loads every CIF under `input`; unreadable files are reported and skipped.
std::vector<CorpusEntry> load_corpus(const fs::path& input, int& failed) {
  std::vector<CorpusEntry> corpus;
  for (const auto& f : collect_cifs(input)) {
    try {
      corpus.push_back({f.id, parse_cif(read_file(f.path))});
    } catch (const std::exception& e) {
      std::cerr << f.path.string() << ": " << e.what() << "\n";
      ++failed;
    }
  }
  return corpus;
}

int run_verify(const VerifyArgs& args) {
  const auto kinds = parse_transform_list(args.transforms);
  int failed = 0;
  const auto corpus = load_corpus(args.input, failed);
  CanonicalizeOptions options;
  options.symprec = args.symprec;
  options.disable_origin_selection = args.mutate;
  const auto report = verify_uniqueness(corpus, args.trials, kinds, args.seed, options);
  if (!args.report.empty()) write_file(args.report, report.to_json().dump(2) + "\n");
  std::printf("structures: %zu\ntrials: %zu\nsuccess_rate: %.4f\n", corpus.size(), report.total, report.rate);
  return failed ? kExitPartial : kExitOk;
}

// ---- dataset ----

struct DatasetArgs {
  std::string input, out, prop_csv, prop_name;
  double prop_width = 0;
  double symprec = 0;
};

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

/// id -> value for one property column. The header row names the columns;
/// the id column is "id" (or the first column).
std::map<std::string, double> read_property_csv(const fs::path& path, const std::string& name) {
  std::stringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line)) throw UsageError(path.string() + ": empty CSV");
  const auto header = split_csv_line(line);
  const auto col_of = [&](const std::string& key) -> std::ptrdiff_t {
    const auto it = std::find(header.begin(), header.end(), key);
    return it == header.end() ? -1 : it - header.begin();
  };
  const std::ptrdiff_t id_col = std::max<std::ptrdiff_t>(0, col_of("id"));
  const std::ptrdiff_t value_col = col_of(name);
  if (value_col < 0) throw UsageError(path.string() + ": no column '" + name + "'");
  std::map<std::string, double> values;
  for (int row = 2; std::getline(in, line); ++row) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    const auto where = path.string() + ":" + std::to_string(row);
    if (static_cast<std::ptrdiff_t>(cells.size()) <= std::max(id_col, value_col)) {
      throw UsageError(where + ": too few columns");
    }
    const std::string& id = cells[id_col];
    if (values.count(id)) throw UsageError(where + ": duplicate id '" + id + "'");
    try {
      std::size_t used = 0;
      values[id] = std::stod(cells[value_col], &used);
      if (used != cells[value_col].size()) throw std::invalid_argument(id);
    } catch (const std::logic_error&) {
      throw UsageError(where + ": value is not a number");
    }
  }
  return values;
}

int run_dataset(const DatasetArgs& args) {
  std::map<std::string, double> props;
  if (!args.prop_csv.empty()) {
    if (args.prop_name.empty() || !(args.prop_width > 0)) {
      throw UsageError("--prop-csv requires --prop-name and a positive --prop-width");
    }
    props = read_property_csv(args.prop_csv, args.prop_name);
  }
  CanonicalizeOptions options;
  options.symprec = args.symprec;
  const auto files = collect_cifs(args.input);
  std::vector<std::string> lines(files.size()), errors(files.size()), warnings(files.size());
  detail::parallel_for(files.size(), [&](std::size_t i) {
    try {
      const Crystal crystal = parse_cif(read_file(files[i].path));
      std::vector<std::pair<std::string, int>> bins;
      if (!args.prop_csv.empty()) {
        const auto it = props.find(files[i].id);
        if (it == props.end()) {
          warnings[i] = "no '" + args.prop_name + "' row; slot left as unknown_prop";
        } else {
          bins.emplace_back(args.prop_name, bin_property(it->second, args.prop_width));
        }
      }
      const CanonicalCell cell = canonicalize(crystal, options);
      const auto seq = encode(cell, bins);
      const auto parsed = parse_sequence(seq.text);
      nlohmann::ordered_json j;
      j["id"] = files[i].id;
      j["sequence"] = seq.text;
      int n_atoms = 0;
      for (const auto& a : cell.atoms) n_atoms += a.multiplicity;
      j["n_atoms"] = n_atoms;
      j["n_ops"] = cell.operations.size();
      j["space_group_label"] = cell.space_group_label;
      j["prop_bins"] = nlohmann::ordered_json::array();
      for (const auto& b : parsed.property_bins) {
        j["prop_bins"].push_back(b ? nlohmann::ordered_json(*b) : nlohmann::ordered_json(nullptr));
      }
      lines[i] = j.dump();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  std::string out;
  int failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!warnings[i].empty()) std::cerr << "warning: " << files[i].id << ": " << warnings[i] << "\n";
    if (!errors[i].empty()) {
      std::cerr << files[i].path.string() << ": " << errors[i] << "\n";
      ++failed;
      continue;
    }
    out += lines[i] + "\n";
  }
  write_file(args.out, out);
  return failed ? kExitPartial : kExitOk;
}

// ---- generate ----

int run_generate(const std::string& out, std::size_t count, std::uint64_t seed, bool prototypes) {
  auto corpus = random_corpus(count, seed);
  if (prototypes) {
    for (auto& e : prototype_corpus()) corpus.push_back(std::move(e));
  }
  for (const auto& e : corpus) write_file(fs::path(out) / (e.id + ".cif"), write_cif(e.crystal));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crystal structure <-> canonical token sequence"};
  app.require_subcommand(1);

  double symprec = 0;
  try {
    symprec = default_symprec();
  } catch (const UsageError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  EncodeArgs enc;
  enc.symprec = symprec;
  auto* encode_cmd = app.add_subcommand("encode", "CIF file or directory to sequence text");
  encode_cmd->add_option("--input", enc.input, "CIF file or directory")->required()->check(CLI::ExistingPath);
  encode_cmd->add_option("--out", enc.out, "output .seq file or directory")->required();
  encode_cmd->add_option("--symprec", enc.symprec, "symmetry tolerance (fractional)")->check(CLI::PositiveNumber);
  encode_cmd->add_option("--prop", enc.props, "property as name=value; fills slots in order");
  encode_cmd->add_option("--prop-width", enc.prop_width, "property bin width");

  std::string dec_in, dec_out;
  auto* decode_cmd = app.add_subcommand("decode", "sequence text to a P1 CIF");
  decode_cmd->add_option("--input", dec_in, "sequence file")->required()->check(CLI::ExistingFile);
  decode_cmd->add_option("--out", dec_out, "output CIF")->required();

  VerifyArgs ver;
  ver.symprec = symprec;
  auto* verify_cmd = app.add_subcommand("verify", "uniqueness under random transforms");
  verify_cmd->add_option("--input", ver.input, "directory of CIFs")->required()->check(CLI::ExistingPath);
  verify_cmd->add_option("--trials", ver.trials, "trials per structure")->check(CLI::NonNegativeNumber);
  verify_cmd->add_option("--transforms", ver.transforms, "comma-separated kinds, or none");
  verify_cmd->add_option("--seed", ver.seed, "random seed");
  verify_cmd->add_option("--report", ver.report, "JSON report path");
  verify_cmd->add_option("--symprec", ver.symprec, "symmetry tolerance")->check(CLI::PositiveNumber);
  verify_cmd->add_flag("--mutate-origin", ver.mutate, "disable canonical origin selection");

  DatasetArgs ds;
  ds.symprec = symprec;
  auto* dataset_cmd = app.add_subcommand("dataset", "directory of CIFs to JSONL");
  dataset_cmd->add_option("--input", ds.input, "directory of CIFs")->required()->check(CLI::ExistingPath);
  dataset_cmd->add_option("--out", ds.out, "output JSONL")->required();
  dataset_cmd->add_option("--prop-csv", ds.prop_csv, "CSV with id and property columns")->check(CLI::ExistingFile);
  dataset_cmd->add_option("--prop-name", ds.prop_name, "property column");
  dataset_cmd->add_option("--prop-width", ds.prop_width, "property bin width");
  dataset_cmd->add_option("--symprec", ds.symprec, "symmetry tolerance")->check(CLI::PositiveNumber);

  std::string gen_out;
  std::size_t gen_count = 100;
  std::uint64_t gen_seed = 0;
  bool gen_protos = false;
  auto* generate_cmd = app.add_subcommand("generate", "write a random synthetic corpus as CIFs");
  generate_cmd->add_option("--out", gen_out, "output directory")->required();
  generate_cmd->add_option("--count", gen_count, "number of random crystals");
  generate_cmd->add_option("--seed", gen_seed, "random seed");
  generate_cmd->add_flag("--prototypes", gen_protos, "also write the built-in prototypes");

  std::string vocab_out;
  auto* vocab_cmd = app.add_subcommand("vocab", "write the token vocabulary as JSON");
  vocab_cmd->add_option("--out", vocab_out, "output JSON (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*encode_cmd) return run_encode(enc);
    if (*decode_cmd) return run_decode(dec_in, dec_out);
    if (*verify_cmd) return run_verify(ver);
    if (*dataset_cmd) return run_dataset(ds);
    if (*generate_cmd) return run_generate(gen_out, gen_count, gen_seed, gen_protos);
    if (*vocab_cmd) {
      const std::string text = vocabulary().to_json().dump(2) + "\n";
      if (vocab_out.empty()) {
        std::cout << text;
      } else {
        write_file(vocab_out, text);
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPartial;
  }
  return kExitUsage;
}
