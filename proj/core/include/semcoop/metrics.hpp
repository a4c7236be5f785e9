#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "semcoop/skb.hpp"

namespace semcoop {

// M x M tally of (actual, predicted) class pairs, ids 1..M.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::uint16_t num_classes);

  std::uint16_t num_classes() const { return num_classes_; }

  void add(ClassId actual, ClassId predicted, std::uint64_t count = 1);
  std::uint64_t at(ClassId actual, ClassId predicted) const;

  std::uint64_t trace() const;
  std::uint64_t total() const;
  std::uint64_t row_sum(ClassId actual) const;

 private:
  std::size_t index(ClassId actual, ClassId predicted) const;

  std::uint16_t num_classes_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion_from_labels(const std::vector<ClassId>& actual,
                                      const std::vector<ClassId>& predicted,
                                      std::uint16_t num_classes);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// One-vs-rest precision/recall/F1 for class m. Degenerate denominators
// follow the zero convention: TP+FP=0 -> precision 0, TP+FN=0 -> recall 0,
// P+R=0 -> f1 0.
PrecisionRecallF1 class_f1(const ConfusionMatrix& cm, ClassId m);

struct ClassScores {
  std::vector<PrecisionRecallF1> per_class;  // index m-1 holds class m
  double macro_f1 = 0.0;

  std::uint16_t num_classes() const {
    return static_cast<std::uint16_t>(per_class.size());
  }
  const PrecisionRecallF1& of(ClassId m) const { return per_class[m - 1]; }
};

ClassScores compute_scores(const ConfusionMatrix& cm);

// Arithmetic mean of the per-class F1 values (all M classes).
double macro_f1(const ClassScores& scores);

// CSV columns: pair, class, precision, recall, f1.
void write_class_scores_csv(std::ostream& out, PairId pair,
                            const ClassScores& scores,
                            bool with_header = true);

}  // namespace semcoop
