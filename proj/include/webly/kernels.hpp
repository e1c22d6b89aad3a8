#pragma once

#include "webly/common.hpp"
#include "webly/models.hpp"

namespace webly {

// Batch compute kernels. webly::kernels holds the OpenMP implementations used
// by the library; webly::ref holds plain serial loops kept as the reference
// the tests and the benchmark compare against.
//
// Parallel loops only ever split across independent outputs (samples, classes,
// hidden units); every reduction runs serially inside one thread in a fixed
// order, so results do not depend on the thread count.

namespace kernels {

// scores(n, c) = clamped sigmoid of the class-c logit for row n of X.
void forward_scores(const ClassifierParams& params, const Mat<double>& X, Mat<double>& scores);

// Gradient of sum_{n,c} v(n,c) * bce(y(n,c), score(n,c)); grad is resized.
void weighted_gradient(const ClassifierParams& params, const Mat<double>& X,
                       const Mat<uint8_t>& y, const Mat<double>& v, std::vector<double>& grad);

// losses(n, c) = bce(scores(n, c), y(n, c))
void bce_losses(const Mat<double>& scores, const Mat<uint8_t>& y, Mat<double>& losses);

}  // namespace kernels

namespace ref {

void forward_scores(const ClassifierParams& params, const Mat<double>& X, Mat<double>& scores);
void weighted_gradient(const ClassifierParams& params, const Mat<double>& X,
                       const Mat<uint8_t>& y, const Mat<double>& v, std::vector<double>& grad);
void bce_losses(const Mat<double>& scores, const Mat<uint8_t>& y, Mat<double>& losses);

}  // namespace ref

}  // namespace webly
