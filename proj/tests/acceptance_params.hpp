#pragma once

// Shared instance counts and seeds: the calibration tool freezes fixture
// constants from exactly these sweeps, and the acceptance suite re-runs them.

namespace nonhom::accept {

inline constexpr int kKqInstances = 500;
inline constexpr unsigned long long kKqSeed = 77;

inline constexpr int kKradialInstances = 120;
inline constexpr unsigned long long kKradialSeed = 2024;

inline constexpr int kPok0Instances = 10;
inline constexpr unsigned long long kPok0Seed = 303;

inline constexpr int kNormWebDraws = 100;
inline constexpr unsigned long long kNormWebSeed = 2100;

inline constexpr int kJnDraws = 50;
inline constexpr unsigned long long kJnSeed = 2200;

inline constexpr int kCzDraws = 50;
inline constexpr unsigned long long kCzSeed = 2300;
inline constexpr int kCzCantorGeneration = 6;

inline constexpr int kSharpDraws = 50;
inline constexpr unsigned long long kSharpSeed = 2400;

inline constexpr int kPairingDraws = 100;
inline constexpr unsigned long long kPairingSeed = 2500;

inline constexpr int kCommutatorDraws = 50;
inline constexpr unsigned long long kCommutatorSeed = 2600;
inline constexpr int kCommutatorPoints = 512;

inline constexpr int kCurvDraws = 20;
inline constexpr unsigned long long kCurvSeed = 2700;

inline constexpr int kTruncationDraws = 40;
inline constexpr unsigned long long kTruncationSeed = 2800;

inline constexpr int kAbsMinMaxDraws = 40;
inline constexpr unsigned long long kAbsMinMaxSeed = 2900;

inline constexpr int kFifiDraws = 40;
inline constexpr unsigned long long kFifiSeed = 3000;

}  // namespace nonhom::accept
