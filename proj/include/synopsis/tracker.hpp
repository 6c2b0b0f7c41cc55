#pragma once

#include "synopsis/image.hpp"
#include "synopsis/tube.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace synopsis {

/// Per-pixel running Gaussian (single-mode background).
struct BackgroundModel {
    int width = 0;
    int height = 0;
    std::vector<double> mean;
    std::vector<double> variance;

    static BackgroundModel from_frame(const GrayFrame& frame, double initial_variance);
    /// Per-pixel median of the frames; robust to objects that keep moving.
    static BackgroundModel from_median(std::span<const GrayFrame> frames, double initial_variance);
};

/// mean <- (1 - rho) mean + rho pixel; variance follows the same blend with the
/// squared deviation. Pixels set in `freeze` keep their statistics.
BackgroundModel update_background(BackgroundModel model, const GrayFrame& frame, double learning_rate,
                                  const Mask* freeze = nullptr);

/// Foreground iff |pixel - mean| > k * max(stddev, stddev_floor).
Mask foreground_mask(const BackgroundModel& model, const GrayFrame& frame, double k, double stddev_floor = 8.0);

/// 8-connected components of at least min_area pixels as tight boxes, ordered
/// by (y, x) of the top-left corner. Each box carries the given frame index.
std::vector<BoundingBox> connected_components(const Mask& mask, int min_area, Frame frame = 0);

struct KalmanNoise {
    double process = 0.01;              // white-acceleration intensity
    double measurement = 1.0;           // px^2 on each center coordinate
    double initial_velocity_var = 100.0;
};

/// Constant-velocity track: state (cx, cy, vx, vy).
struct TrackState {
    TubeId id = 0;
    Eigen::Vector4d state = Eigen::Vector4d::Zero();
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
    BoundingBox last_box;
    int missed = 0;

    static TrackState start(TubeId id, const BoundingBox& box, const KalmanNoise& noise);
    Point center() const { return {state(0), state(1)}; }
};

void kalman_predict(TrackState& track, const KalmanNoise& noise);
void kalman_update(TrackState& track, Point measured_center, const KalmanNoise& noise);

struct TrackerConfig {
    double learning_rate = 0.05;
    double k = 3.0;
    double stddev_floor = 8.0;
    int bootstrap_frames = 25;  // frames in the median background estimate
    int min_area = 20;
    double gate_radius = 30.0;
    int max_missed = 5;
    int min_length = 3;
    KalmanNoise noise;
    FrameRate fps;
};

/// Online phase: background subtraction, detection, Kalman tracking with greedy
/// nearest-neighbor association. Interior misses are filled with the predicted
/// box; trailing misses are dropped.
TubeDatabase track_frames(std::span<const GrayFrame> frames, const TrackerConfig& config);

} // namespace synopsis
