#pragma once

// Per-feature association scores and gene-level p-value summaries.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "netsel/datamodel.hpp"

namespace netsel {

/// Nonnegative per-feature relevance c_p.
class RelevanceVector {
 public:
  RelevanceVector() = default;
  explicit RelevanceVector(Vector scores) : scores_(std::move(scores)) {
    if (!scores_.allFinite()) {
      throw Error(ErrorKind::non_finite, "relevance scores must be finite");
    }
    if (scores_.size() > 0 && scores_.minCoeff() < 0.0) {
      throw Error(ErrorKind::invalid_argument,
                  "relevance scores must be nonnegative");
    }
  }

  const Vector& scores() const { return scores_; }
  Index size() const { return scores_.size(); }
  double operator[](Index p) const { return scores_[p]; }

 private:
  Vector scores_;
};

/// Linear-kernel SKAT score per column: (x~' y~)^2 on centered data, or the
/// squared Pearson correlation when `normalize` is set. Constant columns
/// score 0.
inline RelevanceVector skat_linear_score(const Matrix& x, const Vector& y,
                                         bool normalize = false) {
  if (x.rows() != y.size()) {
    throw Error(ErrorKind::dimension_mismatch, "X rows != y length");
  }
  if (y.size() < 2 || y.maxCoeff() == y.minCoeff()) {
    throw Error(ErrorKind::constant_phenotype, "phenotype is constant");
  }
  const Vector yc = y.array() - y.mean();
  const double yy = yc.squaredNorm();
  Vector c(x.cols());
  for (Index p = 0; p < x.cols(); ++p) {
    const auto col = x.col(p);
    if (col.maxCoeff() == col.minCoeff()) {
      c[p] = 0.0;
      continue;
    }
    // yc sums to zero, so centering the column is only needed for the norm
    const double mean = col.mean();
    const double dot = (col.array() - mean).matrix().dot(yc);
    if (normalize) {
      const double xx = (col.array() - mean).matrix().squaredNorm();
      c[p] = (dot * dot) / (xx * yy);
    } else {
      c[p] = dot * dot;
    }
  }
  return RelevanceVector(std::move(c));
}

inline RelevanceVector skat_linear_score(const FeatureMatrix& x,
                                         const Phenotype& y,
                                         bool normalize = false) {
  if (x.sample_ids() != y.sample_ids()) {
    throw Error(ErrorKind::dimension_mismatch,
                "features and phenotype are not aligned");
  }
  return skat_linear_score(x.values(), y.values(), normalize);
}

// ---------------------------------------------------------------------------
// Inverse normal CDF

namespace detail {

/// Phi^{-1}(q) for q in (0, 0.5]. Acklam's rational approximation followed
/// by one Halley step on the lower-tail CDF.
inline double lower_normal_quantile(double q) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549671010229583e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double q_low = 0.02425;

  double x;
  if (q < q_low) {
    const double t = std::sqrt(-2.0 * std::log(q));
    x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
        ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
  } else {
    const double s = q - 0.5;
    const double r = s * s;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        s /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  // Halley refinement; erfc keeps relative accuracy in the lower tail.
  const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - q;
  const double u =
      e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

}  // namespace detail

/// z = Phi^{-1}(1 - p), with p clamped to [1e-300, 1 - 1e-16].
inline double z_from_p(double p) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw Error(ErrorKind::invalid_argument,
                "p-value must lie in (0, 1], got " + std::to_string(p));
  }
  p = std::clamp(p, 1e-300, 1.0 - 1e-16);
  if (p == 0.5) return 0.0;
  // Phi^{-1}(1 - p) = -Phi^{-1}(p); evaluate whichever tail is <= 0.5 so the
  // argument is exact.
  if (p < 0.5) return -detail::lower_normal_quantile(p);
  return detail::lower_normal_quantile(1.0 - p);
}

// ---------------------------------------------------------------------------
// Gene p-value summaries

enum class SummaryMethod { min, max, mean };

inline SummaryMethod parse_summary_method(const std::string& s) {
  if (s == "min") return SummaryMethod::min;
  if (s == "max") return SummaryMethod::max;
  if (s == "mean") return SummaryMethod::mean;
  throw Error(ErrorKind::invalid_argument, "unknown summary method '" + s + "'");
}

struct GeneScores {
  std::vector<std::string> gene_ids;
  std::vector<double> p_values;
  std::vector<double> z_scores;
  /// Genes in the mapping with no scored feature.
  std::vector<std::string> omitted;
};

/// Summarizes SNP p-values per gene. Genes are emitted in order of first
/// appearance in the mapping.
inline GeneScores summarize_gene_pvalues(
    const std::unordered_map<std::string, double>& snp_p,
    const FeatureGeneMap& mapping, SummaryMethod method) {
  for (const auto& [id, p] : snp_p) {
    if (!(p > 0.0) || !(p <= 1.0)) {
      throw Error(ErrorKind::invalid_argument,
                  "p-value of '" + id + "' outside (0, 1]");
    }
  }
  std::vector<std::string> order;
  std::unordered_map<std::string, std::vector<double>> per_gene;
  for (const auto& [feature, gene] : mapping.pairs()) {
    auto [it, fresh] = per_gene.try_emplace(gene);
    if (fresh) order.push_back(gene);
    const auto p = snp_p.find(feature);
    if (p != snp_p.end()) it->second.push_back(p->second);
  }

  GeneScores out;
  for (const auto& gene : order) {
    const auto& ps = per_gene[gene];
    if (ps.empty()) {
      out.omitted.push_back(gene);
      continue;
    }
    double summary = 0.0;
    switch (method) {
      case SummaryMethod::min:
        summary = *std::min_element(ps.begin(), ps.end());
        break;
      case SummaryMethod::max:
        summary = *std::max_element(ps.begin(), ps.end());
        break;
      case SummaryMethod::mean:
        for (const double p : ps) summary += p;
        summary /= static_cast<double>(ps.size());
        break;
    }
    out.gene_ids.push_back(gene);
    out.p_values.push_back(summary);
    out.z_scores.push_back(z_from_p(summary));
  }
  return out;
}

/// `feature_id<TAB>p`, optional header line.
inline std::unordered_map<std::string, double> load_pvalues(
    const std::string& path) {
  std::unordered_map<std::string, double> out;
  const auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = detail::split_tabs(lines[i].text);
    if (f.size() != 2) {
      throw Error(ErrorKind::ragged_row, "expected 2 fields", lines[i].number);
    }
    if (i == 0 && !detail::try_parse_double(f[1])) continue;
    const double p = detail::parse_double(f[1], lines[i].number, 2);
    if (!out.emplace(std::string(f[0]), p).second) {
      throw Error(ErrorKind::duplicate_id,
                  "duplicate id '" + std::string(f[0]) + "'", lines[i].number,
                  1);
    }
  }
  return out;
}

/// `gene_id<TAB>p<TAB>z`.
inline void write_gene_scores(const GeneScores& s, const std::string& path) {
  auto out = detail::open_output(path);
  for (std::size_t i = 0; i < s.gene_ids.size(); ++i) {
    out << s.gene_ids[i] << '\t' << detail::format_double(s.p_values[i]) << '\t'
        << detail::format_double(s.z_scores[i]) << '\n';
  }
}

/// Reads `gene_id<TAB>p<TAB>z` (optional header).
inline GeneScores load_gene_scores(const std::string& path) {
  GeneScores s;
  const auto lines = detail::read_lines(path);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto f = detail::split_tabs(lines[i].text);
    if (f.size() != 3) {
      throw Error(ErrorKind::ragged_row, "expected 3 fields", lines[i].number);
    }
    if (i == 0 && !detail::try_parse_double(f[2])) continue;
    s.gene_ids.emplace_back(f[0]);
    s.p_values.push_back(detail::parse_double(f[1], lines[i].number, 2));
    s.z_scores.push_back(detail::parse_double(f[2], lines[i].number, 3));
  }
  return s;
}

}  // namespace netsel
