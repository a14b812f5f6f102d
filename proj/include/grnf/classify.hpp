#pragma once

#include <vector>

namespace grnf {

// k-nearest-neighbour classification under Euclidean distance. Every test
// row is assigned the majority label among its k closest training rows;
// vote ties go to the label with the smaller summed neighbour distance,
// then to the lower label. k is clamped to the training-set size.
std::vector<int> knn_classify(const std::vector<std::vector<double>>& train,
                              const std::vector<int>& train_labels,
                              const std::vector<std::vector<double>>& test, int k = 5);

// Fraction of positions where the two label sequences agree.
double classification_accuracy(const std::vector<int>& predicted,
                               const std::vector<int>& truth);

// Linear readout fit by ridge regression against one-hot label targets:
// (X'X + lambda I) W = X'Y solved in closed form, where X carries an
// appended constant channel so affinely separable data can be fit exactly.
struct RidgeModel {
    int dim = 0;                  // input dimension, excluding the constant channel
    std::vector<int> classes;     // sorted distinct training labels
    std::vector<double> weights;  // (dim + 1) x classes.size(), row-major; last row is the intercept
};

RidgeModel ridge_readout(const std::vector<std::vector<double>>& train,
                         const std::vector<int>& train_labels, double lambda);

// Argmax of the linear scores per row; score ties go to the lower label.
std::vector<int> ridge_predict(const RidgeModel& model,
                               const std::vector<std::vector<double>>& data);

}  // namespace grnf
