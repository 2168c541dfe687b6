#include "metaelo/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "metaelo/error.hpp"

namespace metaelo {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

bool is_trim_char(unsigned char c) { return std::isspace(c) || std::ispunct(c); }

bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::toupper(static_cast<unsigned char>(x)) == std::toupper(static_cast<unsigned char>(y));
  });
}

}  // namespace

std::string_view to_string(Averaging averaging) noexcept {
  switch (averaging) {
    case Averaging::binary_positive: return "binary";
    case Averaging::macro: return "macro";
    case Averaging::weighted: return "weighted";
  }
  return "macro";
}

std::string_view to_string(UnparsedPolicy policy) noexcept {
  return policy == UnparsedPolicy::drop ? "drop" : "wrong";
}

Averaging parse_averaging(std::string_view text) {
  if (text == "binary" || text == "binary_positive") return Averaging::binary_positive;
  if (text == "macro") return Averaging::macro;
  if (text == "weighted") return Averaging::weighted;
  throw Error(Errc::Usage, "unknown averaging '" + std::string(text) + "'");
}

UnparsedPolicy parse_unparsed_policy(std::string_view text) {
  if (text == "wrong" || text == "count_wrong") return UnparsedPolicy::count_wrong;
  if (text == "drop") return UnparsedPolicy::drop;
  throw Error(Errc::Usage, "unknown unparsed policy '" + std::string(text) + "'");
}

std::uint64_t ConfusionMatrix::total() const noexcept {
  std::uint64_t sum = unparsed;
  for (const auto& row : counts) sum = std::accumulate(row.begin(), row.end(), sum);
  return sum;
}

std::uint64_t ConfusionMatrix::correct() const noexcept {
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) sum += counts[i][i];
  return sum;
}

std::optional<std::size_t> ConfusionMatrix::index_of(std::string_view label) const noexcept {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

ConfusionMatrix confusion_matrix(std::span<const Label> gold, std::span<const ParsedLabel> pred,
                                 std::span<const Label> labels, UnparsedPolicy policy) {
  if (gold.size() != pred.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(gold.size()) + " gold labels vs " +
                                          std::to_string(pred.size()) + " predictions");
  }
  if (gold.empty()) throw Error(Errc::LengthMismatch, "no items to evaluate");
  if (labels.size() < 2) throw Error(Errc::InvalidConfig, "a label set needs at least two labels");

  ConfusionMatrix cm;
  cm.labels.assign(labels.begin(), labels.end());
  cm.counts.assign(labels.size(), std::vector<std::uint64_t>(labels.size(), 0));
  cm.unparsed_by_gold.assign(labels.size(), 0);

  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto t = cm.index_of(gold[i]);
    if (!t) throw Error(Errc::GoldLabelOutsideSet, "gold label '" + gold[i] + "' not in label set");
    std::optional<std::size_t> p;
    if (pred[i]) p = cm.index_of(*pred[i]);
    if (!p) {
      if (policy == UnparsedPolicy::count_wrong) {
        ++cm.unparsed;
        ++cm.unparsed_by_gold[*t];
      }
      continue;
    }
    ++cm.counts[*t][*p];
  }
  return cm;
}

MetricSet classification_metrics(const ConfusionMatrix& cm, Averaging averaging,
                                 std::optional<std::string_view> positive_label) {
  const std::size_t n = cm.labels.size();
  if (averaging == Averaging::binary_positive && n != 2) {
    throw Error(Errc::NonBinaryWithBinaryAveraging,
                "binary averaging needs exactly two labels, got " + std::to_string(n));
  }

  MetricSet out;
  out.averaging = averaging;
  const std::uint64_t total = cm.total();
  out.accuracy = ratio(cm.correct(), total);

  std::vector<ClassScores> scores(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::uint64_t tp = cm.counts[c][c];
    std::uint64_t predicted = 0;
    std::uint64_t actual = cm.unparsed_by_gold.empty() ? 0 : cm.unparsed_by_gold[c];
    for (std::size_t k = 0; k < n; ++k) {
      predicted += cm.counts[k][c];
      actual += cm.counts[c][k];
    }
    auto& s = scores[c];
    s.precision = ratio(tp, predicted);
    s.recall = ratio(tp, actual);
    s.f1 = harmonic(s.precision, s.recall);
    s.support = actual;
    out.per_class.emplace(cm.labels[c], s);
  }

  switch (averaging) {
    case Averaging::binary_positive: {
      std::size_t pos = 0;
      if (positive_label) {
        auto idx = cm.index_of(*positive_label);
        if (!idx) throw Error(Errc::InvalidConfig, "positive label not in label set");
        pos = *idx;
      }
      out.precision = scores[pos].precision;
      out.recall = scores[pos].recall;
      out.f1 = scores[pos].f1;
      break;
    }
    case Averaging::macro: {
      for (const auto& s : scores) {
        out.precision += s.precision;
        out.recall += s.recall;
        out.f1 += s.f1;
      }
      out.precision /= static_cast<double>(n);
      out.recall /= static_cast<double>(n);
      out.f1 /= static_cast<double>(n);
      break;
    }
    case Averaging::weighted: {
      std::uint64_t support = 0;
      for (const auto& s : scores) {
        out.precision += static_cast<double>(s.support) * s.precision;
        out.recall += static_cast<double>(s.support) * s.recall;
        out.f1 += static_cast<double>(s.support) * s.f1;
        support += s.support;
      }
      if (support > 0) {
        out.precision /= static_cast<double>(support);
        out.recall /= static_cast<double>(support);
        out.f1 /= static_cast<double>(support);
      }
      break;
    }
  }
  return out;
}

ParsedLabel normalize_label(std::string_view raw, std::span<const Label> labels) {
  while (!raw.empty() && is_trim_char(static_cast<unsigned char>(raw.front()))) raw.remove_prefix(1);
  while (!raw.empty() && is_trim_char(static_cast<unsigned char>(raw.back()))) raw.remove_suffix(1);
  if (raw.empty()) return std::nullopt;
  for (const auto& label : labels) {
    if (iequals(raw, label)) return label;
  }
  return std::nullopt;
}

}  // namespace metaelo
