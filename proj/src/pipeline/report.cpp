#include <algorithm>
#include <sstream>

#include "tensoruq/error.hpp"
#include "tensoruq/pipeline.hpp"

namespace tensoruq {

std::optional<CostComparison> cost_comparison(const std::string& model_name) {
  // Smolyak sparse-grid counts are reference numbers only; they are not computed here.
  if (model_name == "mems46") return CostComparison{"8.9e21", 4512, 300};
  if (model_name == "osc57") return CostComparison{"1.6e27", 6844, 500};
  return std::nullopt;
}

std::string summary_text(const FitResult& fit, const GpcModel& model, const SampleSet& samples,
                         const HoldoutSummary& holdout, const ReportOptions& options) {
  const auto decimal = grid_size_decimal(model.space());
  const auto mom = moments(model);
  const auto& c = model.coeffs();
  double cmax = 0.0;
  for (double v : c) cmax = std::max(cmax, std::abs(v));
  const double threshold = options.sparsity_rel_threshold * cmax;
  const auto sparse = sparsity_report(model, threshold);

  std::ostringstream out;
  if (!options.model_name.empty()) out << "model = " << options.model_name << '\n';
  if (options.space_fingerprint)
    out << "space_fingerprint = " << std::hex << options.space_fingerprint << std::dec << '\n';
  out << "dimensions = " << model.space().dim() << '\n';
  out << "order = " << model.order() << '\n';
  out << "samples = " << samples.size() << '\n';
  out << "grid_size = " << decimal << '\n';
  out << "grid_size_approx = " << scientific_string(decimal, 2) << '\n';
  out << "basis_functions = " << model.size() << '\n';
  out << "samples_per_basis_function = "
      << format_double(static_cast<double>(samples.size()) / static_cast<double>(model.size()))
      << '\n';
  out << "selected_rank = " << holdout.rank << '\n';
  out << "selected_lambda = " << format_double(holdout.lambda) << '\n';
  out << "holdout_relative_error = "
      << (holdout.error ? format_double(*holdout.error) : std::string("n/a")) << '\n';
  out << "sweeps = " << fit.sweeps_used << '\n';
  out << "converged = " << (fit.converged ? "true" : "false") << '\n';
  out << "subproblem_warnings = " << fit.subproblem_warnings << '\n';
  out << "final_cost = " << (fit.cost_history.empty() ? std::string("n/a")
                                                      : format_double(fit.cost_history.back()))
      << '\n';
  out << "nonzero_coefficients = " << sparse.kept << '\n';
  out << "nonzero_threshold = " << format_double(threshold) << '\n';
  out << "mean = " << format_double(mom.mean) << '\n';
  out << "variance = " << format_double(mom.variance) << '\n';
  if (const auto cmp = cost_comparison(options.model_name)) {
    out << "reference_tensor_product_samples = " << cmp->tensor_product << '\n';
    out << "reference_sparse_grid_samples = " << cmp->sparse_grid << '\n';
    out << "reference_proposed_samples = " << cmp->proposed << '\n';
  }
  return out.str();
}

void write_report(const std::filesystem::path& out_dir, const FitResult& fit,
                  const GpcModel& model, const SampleSet& samples,
                  const HoldoutSummary& holdout, const ReportOptions& options) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io_error, "cannot create " + out_dir.string() + ": " + ec.message());

  {
    std::ostringstream out;
    out << "sweep,cost\n";
    out << 0 << ',' << format_double(fit.initial_cost) << '\n';
    for (std::size_t s = 0; s < fit.cost_history.size(); ++s)
      out << s + 1 << ',' << format_double(fit.cost_history[s]) << '\n';
    atomic_write(out_dir / "cost_history.csv", out.str());
  }

  atomic_write(out_dir / "coefficients.json", model.to_json().dump(1) + "\n");

  {
    const auto rep = sparsity_report(model, 0.0);
    std::ostringstream out;
    out << "rank,magnitude\n";
    for (std::size_t i = 0; i < rep.sorted_magnitudes.size(); ++i)
      out << i + 1 << ',' << format_double(rep.sorted_magnitudes[i]) << '\n';
    atomic_write(out_dir / "sparsity.csv", out.str());
  }

  {
    const auto values = sample_surrogate(model, options.density_samples, options.density_seed);
    const auto est = kernel_density(values, options.density_grid);
    std::ostringstream out;
    out << "value,density\n";
    if (est.point_mass) {
      out << format_double(est.point_value) << ",inf\n";
    } else {
      for (std::size_t g = 0; g < est.grid.size(); ++g)
        out << format_double(est.grid[g]) << ',' << format_double(est.density[g]) << '\n';
    }
    atomic_write(out_dir / "density.csv", out.str());

    const auto hist = histogram(values, 50);
    std::ostringstream h;
    h << "lower,upper,density\n";
    for (std::size_t b = 0; b < hist.density.size(); ++b)
      h << format_double(hist.edges[b]) << ',' << format_double(hist.edges[b + 1]) << ','
        << format_double(hist.density[b]) << '\n';
    atomic_write(out_dir / "histogram.csv", h.str());
  }

  {
    const auto mom = moments(model);
    atomic_write(out_dir / "moments.txt", "mean = " + format_double(mom.mean) + "\nvariance = " +
                                              format_double(mom.variance) + "\n");
  }

  atomic_write(out_dir / "summary.txt", summary_text(fit, model, samples, holdout, options));
}

}  // namespace tensoruq
