#include "mmp/cli.hpp"

#include <atomic>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "mmp/canonical.hpp"
#include "mmp/diagram.hpp"
#include "mmp/generator.hpp"
#include "mmp/lattice.hpp"
#include "mmp/lattice_terms.hpp"
#include "mmp/states.hpp"
#include "mmp/vectors.hpp"

namespace mmp::cli {

namespace {

struct Failure {
  int code;
  std::string message;
};

struct Globals {
  unsigned parallel = 1;
  std::string format = "mmp";
  bool assert_mode = false;
  std::uint64_t max_nodes = 0;
  double time_limit = 0;

  MmpFormat output_format() const { return format == "numeric" ? MmpFormat::Numeric : MmpFormat::Letters; }
};

// Owns an opened file, or refers to the caller's stream for "-".
class Input {
 public:
  Input(const std::string& path, std::istream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ifstream>(path);
    if (!*file_) throw Failure{kIo, "cannot open " + path};
    stream_ = file_.get();
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

std::string slurp(const std::string& path, std::istream& fallback) {
  Input in(path, fallback);
  std::ostringstream s;
  s << in.get().rdbuf();
  if (in.get().bad()) throw Failure{kIo, "cannot read " + path};
  return s.str();
}

std::string strip(std::string line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
  return line;
}

struct Outcome {
  std::string text;  // printed as is, newline-terminated
  bool negative = false;
  std::optional<Failure> error;
};

using LineHandler = std::function<Outcome(const MmpDiagram&)>;

// Reads diagram lines, handles them in batches on `workers` threads, prints
// results in input order. Returns true if any verdict was negative.
bool stream_diagrams(std::istream& in, std::ostream& out, unsigned workers, const LineHandler& handle) {
  const std::size_t batch_size = workers <= 1 ? 1 : 256 * static_cast<std::size_t>(workers);
  std::vector<std::pair<std::size_t, std::string>> batch;
  std::vector<Outcome> results;
  bool negative = false;
  std::size_t line_no = 0;

  auto process = [&](std::size_t i) {
    const auto& [no, line] = batch[i];
    try {
      results[i] = handle(parse_mmp(line));
    } catch (const MmpParseError& e) {
      results[i].error = Failure{kUsage, "line " + std::to_string(no) + ": " + e.what()};
    } catch (const std::invalid_argument& e) {
      results[i].error = Failure{kUsage, "line " + std::to_string(no) + ": " + e.what()};
    } catch (const EvalBudgetExceeded& e) {
      results[i].error = Failure{kBudget, "line " + std::to_string(no) + ": " + e.what()};
    }
  };
  auto flush = [&] {
    results.assign(batch.size(), {});
    if (workers <= 1 || batch.size() == 1) {
      for (std::size_t i = 0; i < batch.size(); ++i) process(i);
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i; (i = next++) < batch.size();) process(i);
        });
      }
      for (auto& t : pool) t.join();
    }
    for (const Outcome& r : results) {
      if (r.error) {
        out.flush();
        throw *r.error;
      }
      out << r.text;
      negative = negative || r.negative;
    }
    if (workers > 1) out.flush();
    batch.clear();
  };

  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = strip(std::move(line));
    if (is_comment_or_blank(line)) continue;
    batch.emplace_back(line_no, std::move(line));
    if (batch.size() >= batch_size) flush();
  }
  if (in.bad()) throw Failure{kIo, "read error on input"};
  if (!batch.empty()) flush();
  return negative;
}

std::string one_labels(const MmpDiagram& d, const ZeroOneState& s) {
  std::string out;
  for (Vertex v = 0; v < d.vertex_count(); ++v) {
    if (s.values[static_cast<std::size_t>(v)]) out += (out.empty() ? "" : " ") + d.label(v);
  }
  return out;
}

std::pair<int, int> parse_size_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int k = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {k, k};
    }
    const std::string lo = text.substr(0, dots);
    const std::string hi = text.substr(dots + 2);
    const int a = std::stoi(lo, &used);
    if (used != lo.size()) throw std::invalid_argument(text);
    const int b = std::stoi(hi, &used);
    if (used != hi.size()) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw Failure{kUsage, "--block-size expects K or K..K2, got '" + text + "'"};
  }
}

std::vector<Rational> parse_entries(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream s(text);
  for (std::string tok; std::getline(s, tok, ',');) {
    try {
      Rational q(tok);
      if (q.get_den() == 0) throw std::invalid_argument(tok);
      q.canonicalize();
      out.push_back(q);
    } catch (const std::invalid_argument&) {
      throw Failure{kUsage, "--entries expects comma-separated rationals, got '" + tok + "'"};
    }
  }
  return out;
}

std::string lattice_kind(LatticeDiagnostic::Kind k) {
  switch (k) {
    case LatticeDiagnostic::Kind::AtomsCollapsed: return "ATOMS-COLLAPSED";
    case LatticeDiagnostic::Kind::NotPartialOrder: return "NOT-A-PARTIAL-ORDER";
    case LatticeDiagnostic::Kind::NotALattice: return "NOT-A-LATTICE";
    case LatticeDiagnostic::Kind::OrthocomplementIllDefined: return "ORTHOCOMPLEMENT-ILL-DEFINED";
    case LatticeDiagnostic::Kind::NotOrthomodular: return "NOT-ORTHOMODULAR";
  }
  return "?";
}

std::string names(const OmlLattice& l, const std::vector<Element>& xs, std::string_view sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? std::string(sep) : "") + l.name(xs[i]);
  return s;
}

// Subcommand bodies -----------------------------------------------------------

int do_generate(const Globals& g, int blocks, const std::string& sizes, int max_vertices, bool allow_disconnected,
                const std::vector<std::string>& filters, const std::string& out_path, std::ostream& out,
                std::ostream& err) {
  GenerationParams p;
  p.target_blocks = blocks;
  std::tie(p.block_size_min, p.block_size_max) = parse_size_range(sizes);
  p.max_vertices = max_vertices;
  p.require_connected = !allow_disconnected;
  p.filters = filters;
  try {
    p.check();
  } catch (const std::invalid_argument& e) {
    throw Failure{kUsage, e.what()};
  }
  std::ofstream file;
  std::ostream* sink = &out;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw Failure{kIo, "cannot write " + out_path};
    sink = &file;
  }
  GenerateOptions o;
  o.workers = g.parallel;
  o.budget.max_nodes = g.max_nodes;
  o.budget.max_seconds = g.time_limit;
  const MmpFormat fmt = g.output_format();
  try {
    const auto stats = generate_all(p, [&](const MmpDiagram& d) { *sink << serialize_mmp(d, fmt) << '\n'; }, o);
    sink->flush();
    if (!*sink) throw Failure{kIo, "write error"};
    err << stats.summary() << '\n';
  } catch (const SearchBudgetExceeded& e) {
    sink->flush();
    throw Failure{kBudget, std::string(e.what()) + "; " + e.stats().summary()};
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"mmpkit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), in, out, err);
}

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Kochen-Specker diagram toolkit: generation, colorability, states, lattices, vector realizations"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", "mmp dialect " + std::to_string(kMmpDialectVersion));

  Globals g;
  app.add_option("--parallel", g.parallel, "worker threads")->check(CLI::Range(1U, 1024U));
  app.add_option("--format", g.format, "output diagram format")->check(CLI::IsMember({"mmp", "numeric"}));
  app.add_flag("--assert", g.assert_mode, "exit 1 on any negative verdict");
  app.add_option("--max-nodes", g.max_nodes, "search node budget (0: unlimited)");
  app.add_option("--time-limit", g.time_limit, "wall-clock budget in seconds (0: unlimited)")
      ->check(CLI::NonNegativeNumber);

  // generate
  auto* gen = app.add_subcommand("generate", "isomorph-free generation of diagrams");
  int gen_blocks = 1;
  std::string gen_sizes = "3";
  int gen_max_vertices = 0;
  bool gen_connected = false;
  bool gen_disconnected = false;
  std::vector<std::string> gen_filters;
  std::string gen_out;
  gen->add_option("--blocks", gen_blocks, "number of blocks")->required()->check(CLI::PositiveNumber);
  gen->add_option("--block-size", gen_sizes, "K or K..K2");
  gen->add_option("--max-vertices", gen_max_vertices, "vertex bound (default blocks * max size)")
      ->check(CLI::NonNegativeNumber);
  auto* connected_flag = gen->add_flag("--connected", gen_connected, "connected diagrams only (default)");
  gen->add_flag("--allow-disconnected", gen_disconnected, "also emit disconnected diagrams")->excludes(connected_flag);
  gen->add_option("--filter", gen_filters, "emit only diagrams passing the filter")
      ->check(CLI::IsMember(filter_names()));
  gen->add_option("--out", gen_out, "output file");

  // color
  auto* color = app.add_subcommand("color", "0-1 state (colorability) check per diagram");
  std::string color_in = "-";
  bool color_witness = false;
  color->add_option("file", color_in, "diagram file, '-' for stdin");
  color->add_flag("--witness", color_witness, "print the vertices valued 1");

  // states
  auto* states = app.add_subcommand("states", "state-space classification per diagram");
  std::string states_in = "-";
  states->add_option("file", states_in, "diagram file, '-' for stdin");

  // lattice
  auto* lattice = app.add_subcommand("lattice", "pasted ortholattice construction and law checks");
  std::string lattice_in = "-";
  std::vector<std::string> lattice_checks;
  std::string lattice_eval;
  lattice->add_option("file", lattice_in, "diagram file, '-' for stdin");
  lattice->add_option("--check", lattice_checks, "law to check")
      ->check(CLI::IsMember({"orthomodular", "superposition", "minlength"}));
  lattice->add_option("--eval", lattice_eval, "statement file to evaluate exhaustively");

  // realize
  auto* real = app.add_subcommand("realize", "vector realization search");
  std::string real_in = "-";
  int real_dim = 0;
  std::uint64_t real_seed = 0;
  std::uint64_t real_seeds = 1;
  int real_retries = 100;
  std::string real_entries;
  real->add_option("file", real_in, "diagram file, '-' for stdin");
  real->add_option("--dim", real_dim, "dimension")->required()->check(CLI::PositiveNumber);
  real->add_option("--seed", real_seed, "random seed");
  real->add_option("--seeds", real_seeds, "race this many consecutive seeds")->check(CLI::PositiveNumber);
  real->add_option("--retries", real_retries, "restarts per seed")->check(CLI::PositiveNumber);
  real->add_option("--entries", real_entries, "exhaustive search over entries, e.g. -1,0,1");

  // verify
  auto* verify = app.add_subcommand("verify", "exact orthogonality check of a vector file");
  std::string verify_diagram;
  std::string verify_vectors;
  verify->add_option("diagram", verify_diagram, "diagram file")->required();
  verify->add_option("vectors", verify_vectors, "vector file")->required();

  // canon
  auto* canon = app.add_subcommand("canon", "canonical form per diagram");
  std::string canon_in = "-";
  bool canon_aut = false;
  canon->add_option("file", canon_in, "diagram file, '-' for stdin");
  canon->add_flag("--automorphisms", canon_aut, "append the automorphism group order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << "mmp dialect " << kMmpDialectVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    bool negative = false;
    const unsigned workers = g.parallel;
    if (gen->parsed()) {
      return do_generate(g, gen_blocks, gen_sizes, gen_max_vertices, gen_disconnected, gen_filters, gen_out, out, err);
    }
    if (color->parsed()) {
      Input input(color_in, in);
      negative = stream_diagrams(input.get(), out, workers, [&](const MmpDiagram& d) {
        const ColoringResult r = admits_01_state(d);
        Outcome o;
        o.negative = r.colorable;  // colorable means no Kochen-Specker contradiction
        o.text = r.colorable ? "COLORABLE" : "NONCOLORABLE";
        if (r.colorable && color_witness) o.text += " " + one_labels(d, *r.witness);
        o.text += '\n';
        return o;
      });
    } else if (states->parsed()) {
      Input input(states_in, in);
      QuantumOptions qo;
      negative = stream_diagrams(input.get(), out, workers, [&](const MmpDiagram& d) {
        const StateClassification c = classify_state_space(d, qo);
        Outcome o;
        o.negative = !c.admits_quantum_states;
        if (!c.admits_any_state) {
          o.text = "STATELESS\n";
          return o;
        }
        o.text = std::string("STATES 01=") + (c.admits_01_state ? "yes" : "no") +
                 " quantum=" + (c.admits_quantum_states ? "yes" : "no");
        if (c.failing_pair) {
          o.text += " failing=" + d.label(c.failing_pair->first) + "," + d.label(c.failing_pair->second);
        }
        if (c.has_unreachable_atoms) {
          const QuantumCheck q = admits_quantum_states(d);
          o.text += " unreachable=";
          for (std::size_t i = 0; i < q.unreachable_atoms.size(); ++i) {
            o.text += (i ? "," : "") + d.label(q.unreachable_atoms[i]);
          }
        }
        o.text += '\n';
        return o;
      });
    } else if (lattice->parsed()) {
      std::vector<LatticeStatement> statements;
      if (!lattice_eval.empty()) {
        const std::string text = slurp(lattice_eval, in);
        try {
          statements = parse_statement_file(text);
        } catch (const StatementSyntaxError& e) {
          throw Failure{kUsage, lattice_eval + ": " + e.what()};
        }
      }
      Input input(lattice_in, in);
      negative = stream_diagrams(input.get(), out, workers, [&](const MmpDiagram& d) {
        Outcome o;
        auto built = build_lattice(d);
        if (auto* diag = std::get_if<LatticeDiagnostic>(&built)) {
          o.negative = true;
          o.text = lattice_kind(diag->kind) + ": " + diag->message + "\n";
          return o;
        }
        const OmlLattice& l = std::get<OmlLattice>(built);
        o.text = "LATTICE " + std::to_string(l.size()) + " elements\n";
        for (const std::string& check : lattice_checks) {
          LawCheck c;
          std::string detail;
          if (check == "orthomodular") {
            c = check_orthomodular(l);
            if (!c.holds) detail = " x=" + l.name(c.witness[0]) + " y=" + l.name(c.witness[1]);
          } else if (check == "superposition") {
            c = check_superposition(l);
            if (!c.holds) detail = " clause " + std::to_string(c.clause) + ": " + names(l, c.witness, ",");
          } else {
            c = check_minimal_length(l);
            detail = " chain " + names(l, c.witness, " < ");
          }
          o.negative = o.negative || !c.holds;
          o.text += check + (c.holds ? " HOLDS" : " FAILS") + detail + "\n";
        }
        for (const LatticeStatement& s : statements) {
          const StatementResult r = holds_in(l, s);
          o.negative = o.negative || !r.holds;
          o.text += (r.holds ? "HOLDS " : "FAILS ") + to_string(s);
          if (r.witness) {
            o.text += " :";
            for (const auto& [var, e] : *r.witness) o.text += " " + var + "=" + l.name(e);
          }
          o.text += '\n';
        }
        return o;
      });
    } else if (real->parsed()) {
      RealizeOptions ro;
      ro.retries = real_retries;
      if (g.max_nodes > 0) ro.max_nodes = g.max_nodes;
      if (!real_entries.empty()) ro.candidate_entries = parse_entries(real_entries);
      Input input(real_in, in);
      // Seeds are raced inside one diagram, so diagrams go one at a time.
      negative = stream_diagrams(input.get(), out, 1, [&](const MmpDiagram& d) {
        const RealizeResult r = realize_race(d, real_dim, real_seed, real_seeds, workers, ro);
        Outcome o;
        o.negative = r.status != RealizeStatus::Realized;
        o.text = "# " + serialize_mmp(d) + " " + to_string(r.status) + " seed=" + std::to_string(r.seed) +
                 " attempts=" + std::to_string(r.attempts) + " nodes=" + std::to_string(r.nodes);
        if (!r.detail.empty() && o.negative) o.text += " (" + r.detail + ")";
        o.text += '\n';
        if (r.vectors) o.text += serialize_vectors(*r.vectors, d);
        return o;
      });
    } else if (verify->parsed()) {
      std::istringstream diagram_text(slurp(verify_diagram, in));
      std::optional<MmpDiagram> d;
      std::size_t line_no = 0;
      for (std::string line; std::getline(diagram_text, line);) {
        ++line_no;
        line = strip(std::move(line));
        if (is_comment_or_blank(line)) continue;
        try {
          d = parse_mmp(line);
        } catch (const MmpParseError& e) {
          throw Failure{kUsage, verify_diagram + " line " + std::to_string(line_no) + ": " + e.what()};
        }
        break;
      }
      if (!d) throw Failure{kUsage, verify_diagram + ": no diagram line"};
      const std::string vector_text = slurp(verify_vectors, in);
      VectorSet vs;
      RealizationReport report;
      try {
        vs = parse_vectors(vector_text, *d);
        report = verify_realization(*d, vs);
      } catch (const VectorParseError& e) {
        throw Failure{kUsage, verify_vectors + " " + e.what()};
      } catch (const std::invalid_argument& e) {
        throw Failure{kUsage, e.what()};
      }
      negative = !report.valid;
      out << (report.valid ? "VALID" : "INVALID") << '\n';
      for (const auto& v : report.violations) {
        out << "block " << v.block << ": " << d->label(v.u) << "." << d->label(v.v) << " = "
            << v.inner_product.get_str() << '\n';
      }
    } else if (canon->parsed()) {
      Input input(canon_in, in);
      const MmpFormat fmt = g.output_format();
      stream_diagrams(input.get(), out, workers, [&](const MmpDiagram& d) {
        const CanonicalLabeling c = canonical_labeling(d);
        Outcome o;
        o.text = serialize_mmp(c.canonical_diagram, fmt);
        if (canon_aut) o.text += " " + c.automorphism_count.get_str();
        o.text += '\n';
        return o;
      });
    }
    out.flush();
    if (!out) throw Failure{kIo, "write error on output"};
    return (g.assert_mode && negative) ? kNegative : kOk;
  } catch (const Failure& f) {
    err << "error: " << f.message << '\n';
    return f.code;
  }
}

}  // namespace mmp::cli
