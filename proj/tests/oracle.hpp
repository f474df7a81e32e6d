#pragma once

// Reference values computed once with mpmath at 50 digits and frozen here.
namespace oracle {

inline constexpr double kNormalPdfAt1 = 0.24197072451914335;

inline constexpr double kNormalQ96 = 1.75068607125216998;
inline constexpr double kNormalCvar90 = 1.75498331932486807;
inline constexpr double kNormalCvar95 = 2.06271280750742602;
inline constexpr double kNormalCvar96 = 2.15434435064953201;
inline constexpr double kNormalCvar99 = 2.66521422034580481;

inline constexpr double kChi1Q90 = 2.70554345409541457;
inline constexpr double kChi1Q95 = 3.84145882069412596;
inline constexpr double kChi1Q96 = 4.21788458792139991;
inline constexpr double kChi1Q99 = 6.63489660102121514;
inline constexpr double kChi1Cvar90 = 4.39286064278784466;
inline constexpr double kChi1Cvar95 = 5.58200927567194868;
inline constexpr double kChi1Cvar96 = 5.97193469099487438;
inline constexpr double kChi1Cvar99 = 8.44916596210414608;

// Phi(1.75 / sqrt(1.1)): the law of X + sqrt(0.1) V for normal X and V.
inline constexpr double kContaminatedCdf = 0.952397647656133351;

}  // namespace oracle
