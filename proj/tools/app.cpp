#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "glucoge/dataset.hpp"
#include "glucoge/simulate.hpp"

namespace glucoge::app {

namespace fs = std::filesystem;

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

struct MeanStd {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
};

// Sorted before summing so the result does not depend on report order.
MeanStd mean_std(std::vector<double> xs) {
  MeanStd m;
  if (xs.empty()) return m;
  std::sort(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() == 1) {
    m.std = 0.0;
    return m;
  }
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << v;
  return out.str();
}

}  // namespace

NamedGrammar resolve_grammar(const std::string& id, const std::optional<fs::path>& grammar_file) {
  if (grammar_file) {
    return {grammar_file->stem().string(), parse_grammar(read_text_file(*grammar_file))};
  }
  std::string upper(id);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return {upper, bundled_grammar(upper)};
}

// ---------------------------------------------------------------------------

TrainOutcome cmd_train(const TrainSpec& spec) {
  if (spec.datasets.empty()) throw std::invalid_argument("train needs at least one --dataset");
  if (spec.runs == 0) throw std::invalid_argument("--runs must be >= 1");
  if (spec.objectives.empty()) throw std::invalid_argument("train needs at least one objective");
  spec.ga.validate();

  std::vector<NamedGrammar> grammars;
  if (spec.grammar_file) {
    grammars.push_back(resolve_grammar({}, spec.grammar_file));
  } else {
    for (const auto& id : spec.grammars) grammars.push_back(resolve_grammar(id));
  }
  std::vector<PatientSeries> patients;
  for (const auto& path : spec.datasets) patients.push_back(load_patient(path));

  fs::create_directories(spec.out_dir);

  struct Job {
    const PatientSeries* patient;
    const NamedGrammar* grammar;
    Objective objective;
    std::size_t run;
    fs::path path;
  };
  std::vector<Job> jobs;
  for (const auto& p : patients) {
    for (const auto& g : grammars) {
      for (auto o : spec.objectives) {
        for (std::size_t r = 0; r < spec.runs; ++r) {
          jobs.push_back({&p, &g, o, r, spec.out_dir / report_file_name(p.patient_id, g.id, o, r)});
        }
      }
    }
  }

  std::vector<std::optional<RunReport>> reports(jobs.size());
  std::vector<std::string> errors(jobs.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const auto j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const auto& job = jobs[j];
      try {
        GaConfig config = spec.ga;
        config.seed = run_seed(spec.base_seed, job.run);
        auto result = run(config, job.grammar->grammar, job.objective, *job.patient, job.grammar->id);
        auto report = make_report(result, *job.patient);
        if (spec.timestamps) report.metadata["created_utc"] = utc_timestamp();
        write_report(report, job.path);
        if (spec.log) {
          std::lock_guard lock(log_mutex);
          *spec.log << job.path.filename().string() << "  fitness="
                    << (report.fitness.is_worst() ? std::string("worst") : format_double(report.fitness.value()))
                    << "  pae=" << fixed(report.pae, 2) << "%\n";
        }
        reports[j] = std::move(report);
      } catch (const std::exception& e) {
        errors[j] = job.path.filename().string() + ": " + e.what();
      }
    }
  };
  const auto workers = std::max<std::size_t>(1, std::min(spec.jobs, jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  TrainOutcome outcome;
  std::vector<RunReport> done;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (reports[j]) {
      outcome.reports.push_back(jobs[j].path);
      done.push_back(std::move(*reports[j]));
    } else {
      outcome.failures.push_back(errors[j]);
    }
  }
  outcome.summary = summarize(done);
  write_text_file(spec.out_dir / "summary.csv", summary_csv(outcome.summary));
  write_text_file(spec.out_dir / "summary.txt", summary_table(outcome.summary));
  return outcome;
}

std::vector<CellSummary> summarize(const std::vector<RunReport>& reports) {
  using Key = std::tuple<std::string, std::string, int>;
  struct Acc {
    std::size_t runs = 0;
    std::size_t invalid = 0;
    std::vector<double> fitness;
    std::vector<double> pae;
  };
  std::map<Key, Acc> cells;
  for (const auto& r : reports) {
    auto& acc = cells[{r.patient_id, r.grammar_id, static_cast<int>(r.objective)}];
    ++acc.runs;
    if (r.fitness.is_worst() || !std::isfinite(r.pae)) {
      ++acc.invalid;
      continue;
    }
    acc.fitness.push_back(r.fitness.value());
    acc.pae.push_back(r.pae);
  }
  std::vector<CellSummary> out;
  for (const auto& [key, acc] : cells) {
    CellSummary s;
    s.patient = std::get<0>(key);
    s.grammar = std::get<1>(key);
    s.objective = static_cast<Objective>(std::get<2>(key));
    s.runs = acc.runs;
    s.invalid = acc.invalid;
    auto f = mean_std(acc.fitness);
    auto p = mean_std(acc.pae);
    s.fitness_mean = f.mean;
    s.fitness_std = f.std;
    s.pae_mean = p.mean;
    s.pae_std = p.std;
    s.pae_best = acc.pae.empty() ? std::numeric_limits<double>::quiet_NaN()
                                 : *std::min_element(acc.pae.begin(), acc.pae.end());
    out.push_back(s);
  }
  return out;
}

std::vector<RunReport> load_reports(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".report") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<RunReport> reports;
  for (const auto& f : files) reports.push_back(read_report(f));
  return reports;
}

std::string summary_csv(const std::vector<CellSummary>& cells) {
  std::ostringstream out;
  out << "patient,grammar,objective,runs,invalid,fitness_mean,fitness_std,pae_mean,pae_std,pae_best\n";
  for (const auto& c : cells) {
    out << c.patient << ',' << c.grammar << ',' << objective_code(c.objective) << ',' << c.runs << ','
        << c.invalid << ',' << format_double(c.fitness_mean) << ',' << format_double(c.fitness_std) << ','
        << format_double(c.pae_mean) << ',' << format_double(c.pae_std) << ',' << format_double(c.pae_best)
        << '\n';
  }
  return out.str();
}

std::string summary_table(const std::vector<CellSummary>& cells) {
  std::map<std::string, std::vector<const CellSummary*>> by_patient;
  for (const auto& c : cells) by_patient[c.patient].push_back(&c);

  std::ostringstream out;
  for (const auto& [patient, rows] : by_patient) {
    std::vector<std::string> grammars;
    for (const auto* c : rows) {
      if (std::find(grammars.begin(), grammars.end(), c->grammar) == grammars.end()) grammars.push_back(c->grammar);
    }
    out << "Percentage average error, mean (std), patient " << patient << "\n";
    out << std::left << std::setw(16) << "objective";
    for (const auto& g : grammars) out << std::setw(18) << g;
    out << "\n";
    for (auto o : kAllObjectives) {
      bool any = false;
      std::ostringstream line;
      line << std::left << std::setw(16) << objective_name(o);
      for (const auto& g : grammars) {
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const CellSummary* c) { return c->grammar == g && c->objective == o; });
        if (it == rows.end()) {
          line << std::setw(18) << "-";
        } else {
          any = true;
          line << std::setw(18) << (fixed((*it)->pae_mean, 2) + " (" + fixed((*it)->pae_std, 2) + ")");
        }
      }
      if (any) out << line.str() << "\n";
    }
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

EvalOutcome cmd_eval(const std::string& model, const fs::path& dataset) {
  EvalOutcome out;
  std::error_code ec;
  if (fs::is_regular_file(model, ec)) {
    out.model = parse_expression(read_report(model).expression);
  } else {
    out.model = parse_expression(model);
  }
  out.dataset = load_patient(dataset);
  out.estimate = simulate(out.model, out.dataset);
  auto errors = error_series(out.dataset, out.estimate);
  for (std::size_t i = 0; i < std::size(kAllObjectives); ++i) {
    out.objectives[i] = evaluate(kAllObjectives[i], errors, out.dataset);
  }
  out.pae = percentage_average_error(out.dataset, out.estimate);
  return out;
}

std::string format_eval(const EvalOutcome& outcome) {
  std::ostringstream out;
  out << "model:   " << render(outcome.model) << "\n";
  out << "dataset: " << outcome.dataset.patient_id << " (" << outcome.dataset.size() << " steps)\n";
  for (std::size_t i = 0; i < std::size(kAllObjectives); ++i) {
    const auto& f = outcome.objectives[i];
    out << objective_code(kAllObjectives[i]) << ' ' << std::left << std::setw(14) << objective_name(kAllObjectives[i])
        << (f.is_worst() ? std::string("worst") : format_double(f.value())) << "\n";
  }
  out << "pae      " << fixed(outcome.pae, 4) << "%\n";
  return out.str();
}

std::string plot_csv(const PatientSeries& actual, const EstimatedSeries& estimate) {
  std::ostringstream out;
  out << "k,GL,GL_hat\n";
  for (std::size_t i = 0; i < actual.size(); ++i) {
    out << i + 1 << ',' << format_double(actual.gl[i]) << ','
        << (i < estimate.size() ? format_double(estimate.gl_hat[i]) : std::string("nan")) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------

MapOutcome cmd_map(const Grammar& grammar, const std::vector<int>& codons, std::size_t max_wraps) {
  if (codons.empty()) throw std::invalid_argument("map needs at least one codon");
  MapOutcome out;
  out.mapping = map_genotype(grammar, Chromosome::from_values(codons), max_wraps, true);
  if (out.mapping.ok()) {
    out.phenotype = phenotype_text(out.mapping);
    try {
      out.rendered = render(from_derivation(*out.mapping.tree));
    } catch (const MalformedTree&) {
      // Grammars outside the model vocabulary still map; they just do not lower.
    }
  }
  return out;
}

}  // namespace glucoge::app
