#pragma once

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "metaelo/error.hpp"
#include "metaelo/metrics.hpp"

#define CHECK_ERRC(expr, errc)                                   \
  do {                                                           \
    bool thrown_ = false;                                        \
    try {                                                        \
      (void)(expr);                                              \
    } catch (const ::metaelo::Error& e_) {                       \
      thrown_ = true;                                            \
      CHECK_MESSAGE(e_.code() == (errc), e_.what());             \
    }                                                            \
    CHECK_MESSAGE(thrown_, "expected " #errc " from " #expr);    \
  } while (0)

namespace testsupport {

// Logistic expectation through tanh in long double; a different route from the
// library's power-of-ten form.
inline long double oracle_expected(long double r_a, long double r_b) {
  const long double ln10 = 2.302585092994045684017991454684364208L;
  return 0.5L * (1.0L + std::tanh(ln10 * (r_a - r_b) / 800.0L));
}

struct OracleScores {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
  std::map<std::string, double> class_f1;
};

// Re-counts TP/FP/FN per class by walking the items directly, using exact
// integer counts and one division per ratio.
inline OracleScores oracle_metrics(const std::vector<std::string>& gold, const std::vector<metaelo::ParsedLabel>& pred,
                                   const std::vector<std::string>& labels, metaelo::Averaging averaging) {
  OracleScores out;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (pred[i] && *pred[i] == gold[i]) ++correct;
  }
  out.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
  std::vector<double> p(labels.size()), r(labels.size()), f(labels.size());
  std::vector<std::size_t> support(labels.size());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) {
      const bool is_gold = gold[i] == labels[c];
      const bool is_pred = pred[i].has_value() && *pred[i] == labels[c];
      if (is_gold && is_pred) ++tp;
      if (!is_gold && is_pred) ++fp;
      if (is_gold && !is_pred) ++fn;
    }
    support[c] = tp + fn;
    p[c] = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
    r[c] = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
    // 2PR/(P+R) == 2TP/(2TP+FP+FN); the count form keeps it exact.
    f[c] = tp == 0 ? 0.0 : 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
    out.class_f1[labels[c]] = f[c];
  }
  if (averaging == metaelo::Averaging::binary_positive) {
    out.precision = p[0];
    out.recall = r[0];
    out.f1 = f[0];
  } else {
    double wsum = 0;
    for (std::size_t c = 0; c < labels.size(); ++c) {
      const double w = averaging == metaelo::Averaging::macro ? 1.0 : static_cast<double>(support[c]);
      out.precision += w * p[c];
      out.recall += w * r[c];
      out.f1 += w * f[c];
      wsum += w;
    }
    out.precision /= wsum;
    out.recall /= wsum;
    out.f1 /= wsum;
  }
  return out;
}

// A fresh, empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("metaelo-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testsupport
