#include "semcoop/metrics.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace semcoop {

ConfusionMatrix::ConfusionMatrix(std::uint16_t num_classes)
    : num_classes_(num_classes),
      counts_(static_cast<std::size_t>(num_classes) * num_classes, 0) {
  if (num_classes == 0) {
    throw std::invalid_argument("confusion matrix needs at least one class");
  }
}

std::size_t ConfusionMatrix::index(ClassId actual, ClassId predicted) const {
  if (actual < 1 || actual > num_classes_ || predicted < 1 ||
      predicted > num_classes_) {
    throw std::out_of_range("class id outside 1.." +
                            std::to_string(num_classes_));
  }
  return static_cast<std::size_t>(actual - 1) * num_classes_ + (predicted - 1);
}

void ConfusionMatrix::add(ClassId actual, ClassId predicted,
                          std::uint64_t count) {
  counts_[index(actual, predicted)] += count;
}

std::uint64_t ConfusionMatrix::at(ClassId actual, ClassId predicted) const {
  return counts_[index(actual, predicted)];
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (ClassId m = 1; m <= num_classes_; ++m) {
    t += at(m, m);
  }
  return t;
}

std::uint64_t ConfusionMatrix::total() const {
  std::uint64_t t = 0;
  for (std::uint64_t c : counts_) {
    t += c;
  }
  return t;
}

std::uint64_t ConfusionMatrix::row_sum(ClassId actual) const {
  std::uint64_t t = 0;
  for (ClassId p = 1; p <= num_classes_; ++p) {
    t += at(actual, p);
  }
  return t;
}

ConfusionMatrix confusion_from_labels(const std::vector<ClassId>& actual,
                                      const std::vector<ClassId>& predicted,
                                      std::uint16_t num_classes) {
  if (actual.size() != predicted.size()) {
    throw std::invalid_argument(
        "actual and predicted label lists differ in length");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < actual.size(); ++i) {
    cm.add(actual[i], predicted[i]);
  }
  return cm;
}

PrecisionRecallF1 class_f1(const ConfusionMatrix& cm, ClassId m) {
  const double tp = static_cast<double>(cm.at(m, m));
  double fp = 0.0;
  double fn = 0.0;
  for (ClassId a = 1; a <= cm.num_classes(); ++a) {
    if (a != m) {
      fp += static_cast<double>(cm.at(a, m));
    }
  }
  for (ClassId p = 1; p <= cm.num_classes(); ++p) {
    if (p != m) {
      fn += static_cast<double>(cm.at(m, p));
    }
  }
  PrecisionRecallF1 out;
  out.precision = (tp + fp > 0.0) ? tp / (tp + fp) : 0.0;
  out.recall = (tp + fn > 0.0) ? tp / (tp + fn) : 0.0;
  out.f1 = (out.precision + out.recall > 0.0)
               ? 2.0 * out.precision * out.recall /
                     (out.precision + out.recall)
               : 0.0;
  return out;
}

ClassScores compute_scores(const ConfusionMatrix& cm) {
  ClassScores scores;
  scores.per_class.reserve(cm.num_classes());
  double sum = 0.0;
  for (ClassId m = 1; m <= cm.num_classes(); ++m) {
    scores.per_class.push_back(class_f1(cm, m));
    sum += scores.per_class.back().f1;
  }
  scores.macro_f1 = sum / static_cast<double>(cm.num_classes());
  return scores;
}

double macro_f1(const ClassScores& scores) {
  if (scores.per_class.empty()) {
    throw std::invalid_argument("no per-class scores present");
  }
  double sum = 0.0;
  for (const auto& s : scores.per_class) {
    sum += s.f1;
  }
  return sum / static_cast<double>(scores.per_class.size());
}

void write_class_scores_csv(std::ostream& out, PairId pair,
                            const ClassScores& scores, bool with_header) {
  if (with_header) {
    out << "pair,class,precision,recall,f1\n";
  }
  char buf[96];
  for (ClassId m = 1; m <= scores.num_classes(); ++m) {
    const auto& s = scores.of(m);
    std::snprintf(buf, sizeof(buf), "%u,%u,%.9g,%.9g,%.9g\n",
                  static_cast<unsigned>(pair), static_cast<unsigned>(m),
                  s.precision, s.recall, s.f1);
    out << buf;
  }
}

}  // namespace semcoop
