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

// Axis-aligned boxes in continuous corner form (no +1 pixel convention).

#ifndef RANKPAIR_GEOMETRY_H_
#define RANKPAIR_GEOMETRY_H_

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace rankpair {

struct Box {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  // Finite coordinates with x2 >= x1 and y2 >= y1.
  bool valid() const;

  friend bool operator==(const Box&, const Box&) = default;
};

// Throws InvalidArgument when the box is not valid().
void check_box(const Box& b);

// Intersection over union. Zero-area boxes are legal and give 0.
double iou(const Box& a, const Box& b);

// IoU minus the fraction of the enclosing hull not covered by the union.
// In [-1, 1]. Requires both boxes to have positive area.
double giou(const Box& a, const Box& b);

double giou_loss(const Box& pred, const Box& gt);

struct GiouLossGradient {
  double loss = 0.0;
  // d loss / d (x1, y1, x2, y2) of the predicted box.
  std::array<double, 4> d_pred{};
};
// Closed-form gradient. Coordinates that exactly coincide between pred and
// gt sit on a kink; the one-sided derivative where pred is the inner edge is
// used.
GiouLossGradient giou_loss_with_gradient(const Box& pred, const Box& gt);

inline constexpr double kNmsScoreThreshold = 0.15;
inline constexpr double kNmsIouThreshold = 0.6;

// Greedy NMS. Boxes scoring below score_thresh are dropped; the highest
// remaining box (lowest index on ties) is kept and every box overlapping it
// with IoU > iou_thresh is suppressed. Returns kept indices in keep order.
std::vector<std::size_t> nms(std::span<const Box> boxes,
                             std::span<const double> scores,
                             double score_thresh = kNmsScoreThreshold,
                             double iou_thresh = kNmsIouThreshold);

}  // namespace rankpair

#endif  // RANKPAIR_GEOMETRY_H_
