#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace injphase {

/// Current `current` from `start` until the next segment begins.
struct DriveSegment {
  double start = 0.0;    // [s]
  double current = 0.0;  // [A]
};

/// Master perturbation window placed in the gap after slave pulse `gap_index`.
struct Perturbation {
  std::size_t gap_index = 0;
  double start = 0.0;      // [s]
  double duration = 0.0;   // d [s]
  double amplitude = 0.0;  // delta I_j [A]
};

/// Slave pulse-train timing. Pulse k occupies [t_start + k T, t_start + k T + width).
struct PulseTiming {
  double period = 2.5e-9;
  double width = 1.0e-9;
  double t_start = 0.0;
  std::size_t n_pulses = 0;

  double pulse_begin(std::size_t k) const { return t_start + static_cast<double>(k) * period; }
  double pulse_end(std::size_t k) const { return pulse_begin(k) + width; }
  /// Gap after pulse k: [pulse_end(k), pulse_begin(k + 1)).
  double gap_center(std::size_t k) const { return pulse_end(k) + 0.5 * (period - width); }
};

/// Piecewise-constant pump current program I(t). Before the first segment the
/// first segment's current applies.
class DriveWaveform {
 public:
  DriveWaveform() = default;
  explicit DriveWaveform(std::vector<DriveSegment> segments);

  static DriveWaveform constant(double current);

  double at(double t) const;
  std::span<const DriveSegment> segments() const { return segments_; }
  /// End of segment i (infinity for the last one).
  double segment_end(std::size_t i) const;

  const PulseTiming& timing() const { return timing_; }
  const std::vector<Perturbation>& perturbations() const { return perturbations_; }
  double baseline() const { return baseline_; }
  double peak() const { return peak_; }

  /// Sequential lookup for monotonically increasing query times.
  class Cursor {
   public:
    explicit Cursor(const DriveWaveform& w) : w_(&w) {}
    double at(double t);

   private:
    const DriveWaveform* w_;
    std::size_t i_ = 0;
  };

 private:
  friend DriveWaveform build_slave_drive(double, double, double, double, std::size_t, double);
  friend DriveWaveform build_master_drive(double, std::span<const std::pair<std::size_t, double>>,
                                          double, const PulseTiming&);
  friend DriveWaveform switch_on(const DriveWaveform&, double, double);

  std::vector<DriveSegment> segments_;
  PulseTiming timing_;
  std::vector<Perturbation> perturbations_;
  double baseline_ = 0.0;
  double peak_ = 0.0;
};

/// Gain-switching drive: n_pulses rectangular pulses of I_high on an I_low
/// bias, repeating every `period` from `t_start`.
DriveWaveform build_slave_drive(double period, double pulse_width, double I_low, double I_high,
                                std::size_t n_pulses, double t_start = 0.0);

/// Quasi-CW master drive: baseline I_s with rectangular excursions I_s + dI_j
/// of length d centred in the designated inter-pulse gaps of `slave`.
/// Throws ParamError if a window does not fit strictly inside its gap.
DriveWaveform build_master_drive(double I_s,
                                 std::span<const std::pair<std::size_t, double>> perturbations,
                                 double d, const PulseTiming& slave);

/// Same program but held at I_off for t < t_on.
DriveWaveform switch_on(const DriveWaveform& w, double I_off, double t_on);

}  // namespace injphase
