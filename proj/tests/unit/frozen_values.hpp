// Generated by tests/oracles/freeze.py (mpmath, 40 digits). Do not edit.
#pragma once

#include <complex>

namespace frozen {

using cplx = std::complex<double>;

struct KCase { cplx nu, z, value; };
inline const KCase kBesselK[] = {
    {{0.5, 30.0}, {2.0, 1.0}, {3.4811989186538110625e-15, -2.5443962054282194603e-15}},
    {{0.5, 5.0}, {3.0, 0.0}, {0.00016624237452179467871, 0.00044870423439447152182}},
    {{-0.5, 5.0}, {3.0, 0.0}, {0.00016624237452179467871, -0.00044870423439447152182}},
    {{3.7000000000000001776, -20.0}, {0.5, 0.2999999999999999889}, {-4.9709689928898031137e-13, -6.4638316332668091652e-13}},
    {{0.25, 50.0}, {10.0, -4.0}, {-4.6764622587598236119e-28, 8.5626656765848329554e-28}},
    {{1.5, 0.0}, {0.2000000000000000111, 0.0}, {13.766936038790848062, 0.0}},
    {{0.0, 12.0}, {40.0, 25.0}, {1.6912439187143525616e-19, 1.3057328933711083421e-19}},
    {{0.5, -7.5}, {0.0010000000000000000208, 0.0020000000000000000416}, {0.000099235066047487406619, 0.00014066739003365846771}},
};
struct StruveCase { int order; double x, value; };
inline const StruveCase kStruve[] = {
    {0, 0.010000000000000000208, 0.0063662684594890193264},
    {0, 0.5, 0.32724069939418078025},
    {0, 2.0, 1.9374337579914456612},
    {0, 10.0, 2815.6522493745948555},
    {0, 30.0, 781672297823.95624524},
    {-1, 0.010000000000000000208, 0.63664099316813172718},
    {-1, 0.5, 0.69056195499110400637},
    {-1, 2.0, 1.7393795597352971607},
    {-1, 10.0, 2670.9949049808505507},
    {-1, 30.0, 768532038938.95770925},
};
struct PacketCase { cplx nu; double abar, xp, xm; cplx value; };
inline const PacketCase kPacket[] = {
    {{-0.5, -30.0}, 0.0050000000000000001041, 36.0, 34.0, {0.038922308194979253013, -0.086237386459375367826}},
    {{0.5, -30.0}, 0.0050000000000000001041, 36.0, 34.0, {0.08206512174195253645, -0.052379542122113419598}},
    {{-0.5, -3.0}, 0.5, 3.7000000000000001776, 1.1000000000000000888, {-0.2288339243452419416, -1.2940841521364143766}},
    {{0.5, -3.0}, 0.5, -2.0, 4.0, {-0.91124239562706702353, 0.047476553703759221503}},
    {{-0.5, -30.0}, 0.0050000000000000001041, 95.0, 25.0, {-2.6659996363756282745e-7, -4.0218460923846099257e-6}},
    {{0.5, -30.0}, 2.0, 50.0, -10.0, {-0.024996498644837086209, 0.03586017141682746993}},
};
struct EigenCase { double Omega, eta, u; cplx psi0, psi2; };
inline const EigenCase kEigen[] = {
    {0.0, 0.2999999999999999889, 2.0, {-0.076354757088582157211, -0.076354757088582157211}, {0.076354757088582157211, -0.076354757088582157211}},
    {3.0, -0.69999999999999995559, 1.3000000000000000444, {0.43136158726865647189, 1.3559705788677010972}, {1.3933107907158758857, -0.28881494109627334591}},
    {5.0, 1.1000000000000000888, 0.4000000000000000222, {-2.5073557975503301834, -0.18377896372898087814}, {0.19487396340756379672, 2.5065178916984370722}},
    {20.0, 0.0, 7.5, {0.36028510832313825358, -0.47324872101678546102}, {-0.36028510832313825358, -0.47324872101678546102}},
};
struct RapidityCase { double abar, alpha; double value; };
inline const RapidityCase kRapidity[] = {
    {1.0, 0.0, 0.84204887648141666667},
    {0.2999999999999999889, 2.0, -0.10945121233261536846},
    {2.0, 10.0, 2.3471408442441223052e-7},
};
struct MomentCase { double alpha, abar, T, norm, mean, second; };  // chirp e^{+i alpha b}
inline const MomentCase kMoments[] = {
    {1.0, 1.0, 0.0, 2.8624652313505998934, -0.85272886182075839196, 1.3646346009057531554},
    {5.0, 1.0, 3.0, 2.8624652313505998934, -4.2636443091037919598, 21.623876640850240669},
    {30.0, 0.5, 10.0, 10.581498257270231299, -23.391977877310073345, 620.27164822961788432},
    {30.0, 0.10000000000000000555, 50.0, 44.050252451565834651, -17.521725780393557766, 1815.0612121066242278},
};

}  // namespace frozen
