#pragma once

#include <cmath>
#include <vector>

namespace tumsim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
    bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }
};

inline Vec2 operator*(double s, const Vec2& v) { return {s * v.x, s * v.y}; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::sqrt(dot(a, a)); }
inline double dist(const Vec2& a, const Vec2& b) { return norm(a - b); }
// Anticlockwise quarter turn.
inline Vec2 perp(const Vec2& a) { return {-a.y, a.x}; }

// Twice the signed area of triangle (a,b,c); positive when anticlockwise.
// Evaluated in extended precision so that exactly collinear inputs (points on
// axis-aligned lines, exact midpoints) give exactly zero.
inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) {
    long double acx = (long double)a.x - (long double)c.x;
    long double acy = (long double)a.y - (long double)c.y;
    long double bcx = (long double)b.x - (long double)c.x;
    long double bcy = (long double)b.y - (long double)c.y;
    return (double)(acx * bcy - acy * bcx);
}

// Positive when d lies strictly inside the circumcircle of the anticlockwise
// triangle (a,b,c).
inline double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    long double adx = (long double)a.x - (long double)d.x;
    long double ady = (long double)a.y - (long double)d.y;
    long double bdx = (long double)b.x - (long double)d.x;
    long double bdy = (long double)b.y - (long double)d.y;
    long double cdx = (long double)c.x - (long double)d.x;
    long double cdy = (long double)c.y - (long double)d.y;

    long double ad2 = adx * adx + ady * ady;
    long double bd2 = bdx * bdx + bdy * bdy;
    long double cd2 = cdx * cdx + cdy * cdy;

    long double det = adx * (bdy * cd2 - cdy * bd2)
                    - ady * (bdx * cd2 - cdx * bd2)
                    + ad2 * (bdx * cdy - cdx * bdy);
    return (double)det;
}

inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * orient2d(a, b, c);
}

// Circumcentre of a non-degenerate triangle.
inline Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
    double d = 2.0 * orient2d(a, b, c);
    double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
    double ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
    double uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
    return {ux, uy};
}

// Smallest interior angle in radians.
inline double min_angle(const Vec2& a, const Vec2& b, const Vec2& c) {
    double la = dist(b, c), lb = dist(c, a), lc = dist(a, b);
    auto ang = [](double opp, double s1, double s2) {
        double cosv = (s1 * s1 + s2 * s2 - opp * opp) / (2.0 * s1 * s2);
        cosv = std::fmin(1.0, std::fmax(-1.0, cosv));
        return std::acos(cosv);
    };
    double aa = ang(la, lb, lc), ab = ang(lb, lc, la), ac = ang(lc, la, lb);
    return std::fmin(aa, std::fmin(ab, ac));
}

// Even-odd test against a set of closed loops. Points on an edge are
// classified by the crossing parity and should not be fed to this routine
// when an exact answer matters (mask construction treats them as outside).
inline bool point_in_loops(const std::vector<std::vector<Vec2>>& loops, const Vec2& p) {
    bool inside = false;
    for (const auto& loop : loops) {
        std::size_t n = loop.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Vec2& vi = loop[i];
            const Vec2& vj = loop[j];
            if ((vi.y > p.y) != (vj.y > p.y)) {
                double t = (p.y - vi.y) / (vj.y - vi.y);
                if (p.x < vi.x + t * (vj.x - vi.x)) inside = !inside;
            }
        }
    }
    return inside;
}

inline double polygon_signed_area(const std::vector<Vec2>& loop) {
    double s = 0.0;
    std::size_t n = loop.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++)
        s += cross(loop[j], loop[i]);
    return 0.5 * s;
}

} // namespace tumsim
