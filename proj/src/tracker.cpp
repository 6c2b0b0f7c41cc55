#include "synopsis/tracker.hpp"

#include "synopsis/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <tuple>

namespace synopsis {

namespace {

void require_same_size(const BackgroundModel& model, const GrayFrame& frame) {
    frame.validate();
    if (frame.width != model.width || frame.height != model.height) {
        throw ValidationError("frame is " + std::to_string(frame.width) + "x" + std::to_string(frame.height) +
                              ", background model is " + std::to_string(model.width) + "x" +
                              std::to_string(model.height));
    }
}

BoundingBox clamp_box(BoundingBox b, int width, int height) {
    b.w = std::min(b.w, width);
    b.h = std::min(b.h, height);
    b.x = std::clamp(b.x, 0, width - b.w);
    b.y = std::clamp(b.y, 0, height - b.h);
    return b;
}

BoundingBox box_around(Point center, const BoundingBox& size, Frame frame, int width, int height) {
    BoundingBox b = size;
    b.frame = frame;
    b.x = static_cast<int>(std::lround(center.x - size.w / 2.0));
    b.y = static_cast<int>(std::lround(center.y - size.h / 2.0));
    return clamp_box(b, width, height);
}

struct LiveTrack {
    TrackState kf;
    std::vector<BoundingBox> boxes;
    std::size_t confirmed = 0;  // boxes up to the last matched detection
};

} // namespace

BackgroundModel BackgroundModel::from_frame(const GrayFrame& frame, double initial_variance) {
    frame.validate();
    BackgroundModel m;
    m.width = frame.width;
    m.height = frame.height;
    m.mean.assign(frame.pixels.begin(), frame.pixels.end());
    m.variance.assign(frame.pixels.size(), initial_variance);
    return m;
}

BackgroundModel BackgroundModel::from_median(std::span<const GrayFrame> frames, double initial_variance) {
    if (frames.empty()) {
        throw ValidationError("median background needs at least one frame");
    }
    BackgroundModel m = from_frame(frames.front(), initial_variance);
    std::vector<std::uint8_t> column(frames.size());
    for (std::size_t i = 0; i < m.mean.size(); ++i) {
        for (std::size_t f = 0; f < frames.size(); ++f) {
            require_same_size(m, frames[f]);
            column[f] = frames[f].pixels[i];
        }
        const auto mid = column.begin() + static_cast<std::ptrdiff_t>(column.size() / 2);
        std::nth_element(column.begin(), mid, column.end());
        m.mean[i] = *mid;
    }
    return m;
}

BackgroundModel update_background(BackgroundModel model, const GrayFrame& frame, double learning_rate,
                                  const Mask* freeze) {
    require_same_size(model, frame);
    if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
        throw ValidationError("learning rate must lie in (0, 1]");
    }
    for (std::size_t i = 0; i < model.mean.size(); ++i) {
        if (freeze != nullptr && freeze->bits[i] != 0) {
            continue;
        }
        const double pixel = frame.pixels[i];
        model.mean[i] = (1.0 - learning_rate) * model.mean[i] + learning_rate * pixel;
        const double dev = pixel - model.mean[i];
        model.variance[i] = (1.0 - learning_rate) * model.variance[i] + learning_rate * dev * dev;
    }
    return model;
}

Mask foreground_mask(const BackgroundModel& model, const GrayFrame& frame, double k, double stddev_floor) {
    require_same_size(model, frame);
    Mask mask(frame.width, frame.height);
    for (std::size_t i = 0; i < model.mean.size(); ++i) {
        const double sigma = std::max(std::sqrt(model.variance[i]), stddev_floor);
        if (std::abs(frame.pixels[i] - model.mean[i]) > k * sigma) {
            mask.bits[i] = 1;
        }
    }
    return mask;
}

std::vector<BoundingBox> connected_components(const Mask& mask, int min_area, Frame frame) {
    std::vector<BoundingBox> out;
    std::vector<std::uint8_t> visited(mask.bits.size(), 0);
    std::deque<std::pair<int, int>> queue;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const std::size_t start = static_cast<std::size_t>(y) * mask.width + x;
            if (!mask.bits[start] || visited[start]) continue;
            int x0 = x, x1 = x, y0 = y, y1 = y;
            int area = 0;
            visited[start] = 1;
            queue.emplace_back(x, y);
            while (!queue.empty()) {
                const auto [cx, cy] = queue.front();
                queue.pop_front();
                ++area;
                x0 = std::min(x0, cx);
                x1 = std::max(x1, cx);
                y0 = std::min(y0, cy);
                y1 = std::max(y1, cy);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) continue;
                        const std::size_t n = static_cast<std::size_t>(ny) * mask.width + nx;
                        if (mask.bits[n] && !visited[n]) {
                            visited[n] = 1;
                            queue.emplace_back(nx, ny);
                        }
                    }
                }
            }
            if (area >= min_area) {
                out.push_back(BoundingBox{frame, x0, y0, x1 - x0 + 1, y1 - y0 + 1});
            }
        }
    }
    std::sort(out.begin(), out.end(),
              [](const BoundingBox& l, const BoundingBox& r) { return std::tie(l.y, l.x) < std::tie(r.y, r.x); });
    return out;
}

TrackState TrackState::start(TubeId id, const BoundingBox& box, const KalmanNoise& noise) {
    TrackState t;
    t.id = id;
    const Point c = box.center();
    t.state << c.x, c.y, 0.0, 0.0;
    t.covariance = Eigen::Matrix4d::Zero();
    t.covariance(0, 0) = noise.measurement;
    t.covariance(1, 1) = noise.measurement;
    t.covariance(2, 2) = noise.initial_velocity_var;
    t.covariance(3, 3) = noise.initial_velocity_var;
    t.last_box = box;
    return t;
}

void kalman_predict(TrackState& track, const KalmanNoise& noise) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = 1.0;
    f(1, 3) = 1.0;
    // Discrete white-acceleration noise with dt = 1.
    Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
    q(0, 0) = q(1, 1) = 0.25;
    q(0, 2) = q(2, 0) = q(1, 3) = q(3, 1) = 0.5;
    q(2, 2) = q(3, 3) = 1.0;
    q *= noise.process;
    track.state = f * track.state;
    track.covariance = f * track.covariance * f.transpose() + q;
    track.covariance = 0.5 * (track.covariance + track.covariance.transpose()).eval();
}

void kalman_update(TrackState& track, Point measured_center, const KalmanNoise& noise) {
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    const Eigen::Matrix2d r = Eigen::Matrix2d::Identity() * noise.measurement;
    const Eigen::Vector2d z(measured_center.x, measured_center.y);

    const Eigen::Vector2d innovation = z - h * track.state;
    const Eigen::Matrix2d s = h * track.covariance * h.transpose() + r;
    const Eigen::Matrix<double, 4, 2> gain = track.covariance * h.transpose() * s.inverse();
    track.state += gain * innovation;
    // Joseph form keeps the covariance symmetric positive semi-definite.
    const Eigen::Matrix4d i_kh = Eigen::Matrix4d::Identity() - gain * h;
    track.covariance = i_kh * track.covariance * i_kh.transpose() + gain * r * gain.transpose();
    track.covariance = 0.5 * (track.covariance + track.covariance.transpose()).eval();
}

TubeDatabase track_frames(std::span<const GrayFrame> frames, const TrackerConfig& config) {
    if (frames.empty()) {
        throw ValidationError("tracking needs at least one frame");
    }
    const int width = frames.front().width;
    const int height = frames.front().height;
    for (std::size_t i = 0; i < frames.size(); ++i) {
        frames[i].validate();
        if (frames[i].width != width || frames[i].height != height) {
            throw ValidationError("frame " + std::to_string(i) + " changes dimensions");
        }
    }

    const double initial_variance = config.stddev_floor * config.stddev_floor;
    const std::size_t bootstrap = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(config.bootstrap_frames, 1)),
                                                          1, frames.size());
    BackgroundModel model = BackgroundModel::from_median(frames.first(bootstrap), initial_variance);

    std::vector<LiveTrack> live;
    std::vector<Tube> finished;
    TubeId next_id = 1;

    const auto retire = [&](LiveTrack& track) {
        track.boxes.resize(track.confirmed);
        if (static_cast<int>(track.boxes.size()) >= config.min_length) {
            finished.emplace_back(track.kf.id, std::move(track.boxes));
        }
    };

    for (std::size_t fi = 0; fi < frames.size(); ++fi) {
        const Frame frame = static_cast<Frame>(fi);
        const Mask mask = foreground_mask(model, frames[fi], config.k, config.stddev_floor);
        const auto detections = connected_components(mask, config.min_area, frame);

        for (auto& track : live) {
            kalman_predict(track.kf, config.noise);
        }

        struct Candidate {
            double distance;
            std::size_t track;
            std::size_t detection;
        };
        std::vector<Candidate> candidates;
        for (std::size_t t = 0; t < live.size(); ++t) {
            const Point predicted = live[t].kf.center();
            for (std::size_t d = 0; d < detections.size(); ++d) {
                const Point c = detections[d].center();
                const double dist = std::hypot(c.x - predicted.x, c.y - predicted.y);
                if (dist <= config.gate_radius) {
                    candidates.push_back({dist, t, d});
                }
            }
        }
        std::sort(candidates.begin(), candidates.end(), [&](const Candidate& l, const Candidate& r) {
            return std::tie(l.distance, live[l.track].kf.id, l.detection) <
                   std::tie(r.distance, live[r.track].kf.id, r.detection);
        });

        std::vector<bool> track_used(live.size(), false);
        std::vector<bool> detection_used(detections.size(), false);
        for (const auto& c : candidates) {
            if (track_used[c.track] || detection_used[c.detection]) continue;
            track_used[c.track] = true;
            detection_used[c.detection] = true;
            LiveTrack& track = live[c.track];
            kalman_update(track.kf, detections[c.detection].center(), config.noise);
            track.kf.last_box = detections[c.detection];
            track.kf.missed = 0;
            track.boxes.push_back(detections[c.detection]);
            track.confirmed = track.boxes.size();
        }

        std::vector<LiveTrack> still_live;
        for (std::size_t t = 0; t < live.size(); ++t) {
            LiveTrack& track = live[t];
            if (!track_used[t]) {
                ++track.kf.missed;
                if (track.kf.missed >= config.max_missed) {
                    retire(track);
                    continue;
                }
                track.boxes.push_back(box_around(track.kf.center(), track.kf.last_box, frame, width, height));
            }
            still_live.push_back(std::move(track));
        }
        live = std::move(still_live);

        for (std::size_t d = 0; d < detections.size(); ++d) {
            if (detection_used[d]) continue;
            LiveTrack track;
            track.kf = TrackState::start(next_id++, detections[d], config.noise);
            track.boxes.push_back(detections[d]);
            track.confirmed = 1;
            live.push_back(std::move(track));
        }

        model = update_background(std::move(model), frames[fi], config.learning_rate, &mask);
    }
    for (auto& track : live) {
        retire(track);
    }

    SceneInfo scene;
    scene.width = width;
    scene.height = height;
    scene.fps = config.fps;
    return TubeDatabase(std::move(scene), std::move(finished));
}

} // namespace synopsis
