/*
 * Copyright 2026 The rankpair Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rankpair/geometry.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "rankpair/errors.h"

namespace rankpair {
namespace {

struct Overlap {
  double iw, ih, inter, uni, hull_w, hull_h, hull;
};

Overlap overlap(const Box& a, const Box& b) {
  Overlap o{};
  o.iw = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  o.ih = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  o.inter = o.iw * o.ih;
  o.uni = a.area() + b.area() - o.inter;
  o.hull_w = std::max(a.x2, b.x2) - std::min(a.x1, b.x1);
  o.hull_h = std::max(a.y2, b.y2) - std::min(a.y1, b.y1);
  o.hull = o.hull_w * o.hull_h;
  return o;
}

void check_positive_area(const Box& b, const char* which) {
  check_box(b);
  if (!(b.width() > 0.0 && b.height() > 0.0)) {
    throw InvalidArgument(std::string("giou: zero-area ") + which + " box");
  }
}

}  // namespace

bool Box::valid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
         std::isfinite(y2) && x2 >= x1 && y2 >= y1;
}

void check_box(const Box& b) {
  if (!b.valid()) {
    throw InvalidArgument("invalid box [" + std::to_string(b.x1) + ", " +
                          std::to_string(b.y1) + ", " + std::to_string(b.x2) +
                          ", " + std::to_string(b.y2) + "]");
  }
}

double iou(const Box& a, const Box& b) {
  check_box(a);
  check_box(b);
  const Overlap o = overlap(a, b);
  if (o.uni <= 0.0) return 0.0;
  return o.inter / o.uni;
}

double giou(const Box& a, const Box& b) {
  check_positive_area(a, "first");
  check_positive_area(b, "second");
  const Overlap o = overlap(a, b);
  return o.inter / o.uni - (o.hull - o.uni) / o.hull;
}

namespace {

// 1 - GIoU written as (U - I)/U + (C - U)/C, which avoids the cancellation
// in 1 - I/U and is exact for hand-checkable fixtures.
double giou_loss_from(const Overlap& o) {
  return (o.uni - o.inter) / o.uni + (o.hull - o.uni) / o.hull;
}

}  // namespace

double giou_loss(const Box& pred, const Box& gt) {
  check_positive_area(pred, "predicted");
  check_positive_area(gt, "ground-truth");
  return giou_loss_from(overlap(pred, gt));
}

GiouLossGradient giou_loss_with_gradient(const Box& pred, const Box& gt) {
  check_positive_area(pred, "predicted");
  check_positive_area(gt, "ground-truth");
  const Overlap o = overlap(pred, gt);

  // loss = 2 - I/U - U/C with U = A_pred + A_gt - I.
  const double w = pred.width();
  const double h = pred.height();
  const std::array<double, 4> d_area{-h, -w, h, w};

  std::array<double, 4> d_inter{};
  if (o.iw > 0.0 && o.ih > 0.0) {
    if (pred.x1 >= gt.x1) d_inter[0] = -o.ih;
    if (pred.y1 >= gt.y1) d_inter[1] = -o.iw;
    if (pred.x2 <= gt.x2) d_inter[2] = o.ih;
    if (pred.y2 <= gt.y2) d_inter[3] = o.iw;
  }
  std::array<double, 4> d_hull{};
  if (pred.x1 < gt.x1) d_hull[0] = -o.hull_h;
  if (pred.y1 < gt.y1) d_hull[1] = -o.hull_w;
  if (pred.x2 > gt.x2) d_hull[2] = o.hull_h;
  if (pred.y2 > gt.y2) d_hull[3] = o.hull_w;

  GiouLossGradient out;
  out.loss = giou_loss_from(o);
  for (int k = 0; k < 4; ++k) {
    const double d_uni = d_area[k] - d_inter[k];
    const double d_iou = (d_inter[k] * o.uni - o.inter * d_uni) / (o.uni * o.uni);
    const double d_cover = (d_uni * o.hull - o.uni * d_hull[k]) / (o.hull * o.hull);
    out.d_pred[k] = -d_iou - d_cover;
  }
  return out;
}

std::vector<std::size_t> nms(std::span<const Box> boxes,
                             std::span<const double> scores,
                             double score_thresh, double iou_thresh) {
  if (boxes.size() != scores.size()) {
    throw InvalidArgument("nms: boxes and scores differ in length");
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    check_box(boxes[i]);
    if (scores[i] >= score_thresh) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<std::size_t> kept;
  std::vector<bool> suppressed(order.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (suppressed[i]) continue;
    kept.push_back(order[i]);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (!suppressed[j] && iou(boxes[order[i]], boxes[order[j]]) > iou_thresh) {
        suppressed[j] = true;
      }
    }
  }
  return kept;
}

}  // namespace rankpair
