#include <cmath>

#include "eigensal/imagekit.hpp"

namespace eigensal {

namespace {

// sRGB primaries, D65 white. The reference white is taken as the row sums
// of the matrix so that (255,255,255) lands on a = b = 0.
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};

constexpr double kEpsilon = 216.0 / 24389.0;
constexpr double kKappa = 24389.0 / 27.0;

double srgb_to_linear(double v8) {
  const double c = v8 / 255.0;
  return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
}

double lab_f(double t) {
  return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0;
}

}  // namespace

LabPlanes rgb_to_lab(const RgbImage& img) {
  double white[3];
  for (int i = 0; i < 3; ++i) white[i] = kRgbToXyz[i][0] + kRgbToXyz[i][1] + kRgbToXyz[i][2];

  LabPlanes lab{Plane(img.height(), img.width()), Plane(img.height(), img.width()),
                Plane(img.height(), img.width())};
  for (std::size_t i = 0; i < img.pixel_count(); ++i) {
    const double rgb[3] = {srgb_to_linear(img.r().values()[i]), srgb_to_linear(img.g().values()[i]),
                           srgb_to_linear(img.b().values()[i])};
    double f[3];
    for (int k = 0; k < 3; ++k) {
      const double xyz = kRgbToXyz[k][0] * rgb[0] + kRgbToXyz[k][1] * rgb[1] + kRgbToXyz[k][2] * rgb[2];
      f[k] = lab_f(xyz / white[k]);
    }
    lab.l.values()[i] = 116.0 * f[1] - 16.0;
    lab.a.values()[i] = 500.0 * (f[0] - f[1]);
    lab.b.values()[i] = 200.0 * (f[1] - f[2]);
  }
  return lab;
}

}  // namespace eigensal
