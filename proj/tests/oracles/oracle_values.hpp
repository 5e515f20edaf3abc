#pragma once

// Generated by gen_oracles.py (sympy); do not edit.

namespace oracle {

struct FramePoint {
  const char* entry;
  double u1, u2, lambda, K_Omega, K;
  double n[3], xi[3];
};

inline constexpr FramePoint kFramePoints[] = {
    {"ex-5.8", 0.3, 0.4, 0.80000000000000004, -0.73898315816266935, -0.92372894770333669, {-0.15646110083700632, -0.2985615229707444, 0.94147806184013749}, {-0.27055473448115108, -0.11634616222605429, 0.95944187241537859}},
    {"ex-5.8", -0.7, 0.2, 0.40000000000000002, -0.19668794477802257, -0.4917198619450564, {-0.033506601975006607, 0.5826138259138921, 0.81205814907435381}, {-0.70985565914617355, 0.072663890316107968, 0.94977604477564581}},
    {"ex-5.8", 0.5, -0.3, -0.59999999999999998, 0.41586250709757439, -0.69310417849595729, {-0.082281289080097561, -0.44729950308724475, 0.89059134512144311}, {-0.21587083511981767, -0.12196091511939057, 0.94332262601389083}},
    {"ex-5.9", 0.3, 0.4, 0.80000000000000004, -0.57863500925838041, -0.72329376157297542, {-0.15220169060699201, -0.26821256568431395, 0.95126056629370015}, {0.27334353888492058, 0, 1.0131933841334388}},
    {"ex-5.9", -0.7, 0.2, 0.40000000000000002, -0.17879571995829063, -0.44698929989572656, {-0.032837080614105084, 0.57008820510599101, 0.82092701535262702}, {0.14821783349880874, 0, 1.001952554451947}},
    {"ex-5.9", 0.5, -0.3, -0.59999999999999998, 0.39159508898647516, -0.65265848164412521, {-0.079794034861237942, -0.4556014323469107, 0.88660038734708824}, {-0.23443003786916689, 0, 0.99268097146599443}},
    {"ex-5.10", 1.0, 0.0, 12, 0.041522491349480967, 0.0034602076124567475, {-0.97014250014533188, 0, 0.24253562503633297}, {0, 0, 1}},
    {"ex-5.10", 0.5, 0.1, 2.8799999999999999, 1.9880537848070943, 0.69029645305801879, {-0.40106206625703489, -0.091150469603871562, 0.91150469603871564}, {0, 0, 1}},
    {"ex-5.10", 0.3, -0.7, -4.7999999999999998, -0.26796678169172977, 0.055826412852443698, {0.80495251789734301, 0.34025770684066431, 0.48608243834380621}, {0, 0, 1}},
    {"paraboloid", 0.2, 0.3, 1, 0.78314668337379589, 0.78314668337379589, {-0.18814417367671946, -0.2822162605150792, 0.94072086838359725}, {0, 0, 1}},
    {"paraboloid", -0.5, 0.7, 1, 0.33029462280354077, 0.33029462280354077, {0.37904902178945171, -0.53066863050523239, 0.75809804357890342}, {0, 0, 1}},
};

}  // namespace oracle
