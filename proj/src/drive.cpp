#include "injphase/drive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "injphase/units.hpp"

namespace injphase {

namespace {

// Drops zero-length segments and merges neighbours with equal current.
std::vector<DriveSegment> normalize(std::vector<DriveSegment> in) {
  std::vector<DriveSegment> out;
  out.reserve(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (i + 1 < in.size() && in[i + 1].start == in[i].start) continue;
    if (!out.empty() && out.back().current == in[i].current) continue;
    out.push_back(in[i]);
  }
  return out;
}

}  // namespace

DriveWaveform::DriveWaveform(std::vector<DriveSegment> segments) {
  if (segments.empty()) throw ParamError("segments", "drive waveform needs at least one segment");
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (!std::isfinite(segments[i].start) || !std::isfinite(segments[i].current))
      throw ParamError("segments", "drive segment values must be finite");
    if (segments[i].current < 0.0)
      throw ParamError("current", "drive currents must be >= 0");
    if (i > 0 && !(segments[i].start >= segments[i - 1].start))
      throw ParamError("segments", "drive segments must be ordered in time");
  }
  segments_ = normalize(std::move(segments));
  baseline_ = segments_.front().current;
  peak_ = std::max_element(segments_.begin(), segments_.end(),
                           [](auto& a, auto& b) { return a.current < b.current; })
              ->current;
}

DriveWaveform DriveWaveform::constant(double current) {
  return DriveWaveform({{0.0, current}});
}

double DriveWaveform::at(double t) const {
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const DriveSegment& s) { return v < s.start; });
  if (it == segments_.begin()) return segments_.front().current;
  return std::prev(it)->current;
}

double DriveWaveform::segment_end(std::size_t i) const {
  return i + 1 < segments_.size() ? segments_[i + 1].start
                                  : std::numeric_limits<double>::infinity();
}

double DriveWaveform::Cursor::at(double t) {
  const auto segs = w_->segments();
  while (i_ + 1 < segs.size() && segs[i_ + 1].start <= t) ++i_;
  return segs[i_].current;
}

DriveWaveform build_slave_drive(double period, double pulse_width, double I_low, double I_high,
                                std::size_t n_pulses, double t_start) {
  if (!(period > 0.0)) throw ParamError("period", "period: must be > 0");
  if (!(pulse_width > 0.0 && pulse_width < period))
    throw ParamError("pulse_width", "pulse_width: must lie in (0, period)");
  if (!(I_low >= 0.0)) throw ParamError("I_low", "I_low: must be >= 0");
  if (I_high < I_low) throw ParamError("I_high", "I_high: must be >= I_low");

  std::vector<DriveSegment> segs;
  segs.push_back({std::min(0.0, t_start), I_low});
  for (std::size_t k = 0; k < n_pulses; ++k) {
    const double begin = t_start + static_cast<double>(k) * period;
    segs.push_back({begin, I_high});
    segs.push_back({begin + pulse_width, I_low});
  }
  DriveWaveform w(std::move(segs));
  w.timing_ = {period, pulse_width, t_start, n_pulses};
  w.baseline_ = I_low;
  return w;
}

DriveWaveform build_master_drive(double I_s,
                                 std::span<const std::pair<std::size_t, double>> perturbations,
                                 double d, const PulseTiming& slave) {
  if (!(I_s >= 0.0)) throw ParamError("I_s", "I_s: must be >= 0");
  if (!perturbations.empty() && !(d > 0.0)) throw ParamError("d", "d: must be > 0");

  std::vector<Perturbation> windows;
  for (auto [gap, dI] : perturbations) {
    const double gap_len = slave.period - slave.width;
    if (!(d < gap_len))
      throw ParamError("d", "d: perturbation window of " + std::to_string(d) +
                                " s does not fit inside the " + std::to_string(gap_len) +
                                " s gap between slave pulses");
    if (slave.n_pulses > 0 && gap >= slave.n_pulses)
      throw ParamError("gap_index", "gap_index: " + std::to_string(gap) + " is past the last pulse");
    if (I_s + dI < 0.0) throw ParamError("delta_I", "delta_I: perturbed current is negative");
    windows.push_back({gap, slave.gap_center(gap) - 0.5 * d, d, dI});
  }
  std::sort(windows.begin(), windows.end(),
            [](auto& a, auto& b) { return a.start < b.start; });
  for (std::size_t i = 1; i < windows.size(); ++i)
    if (windows[i].gap_index == windows[i - 1].gap_index)
      throw ParamError("gap_index", "gap_index: two perturbations share one gap");

  std::vector<DriveSegment> segs{{std::min(0.0, slave.t_start), I_s}};
  for (const auto& p : windows) {
    segs.push_back({p.start, I_s + p.amplitude});
    segs.push_back({p.start + p.duration, I_s});
  }
  DriveWaveform w(std::move(segs));
  w.timing_ = slave;
  w.perturbations_ = std::move(windows);
  w.baseline_ = I_s;
  return w;
}

DriveWaveform switch_on(const DriveWaveform& w, double I_off, double t_on) {
  std::vector<DriveSegment> segs{{std::min(0.0, t_on), I_off}};
  segs.push_back({t_on, w.at(t_on)});
  for (const auto& s : w.segments())
    if (s.start > t_on) segs.push_back(s);
  DriveWaveform out(std::move(segs));
  out.timing_ = w.timing_;
  out.perturbations_ = w.perturbations_;
  out.baseline_ = w.baseline_;
  return out;
}

}  // namespace injphase
