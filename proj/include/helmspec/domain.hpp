#pragma once

namespace helmspec {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Interval (-a/2, a/2) or rectangle (-a/2, a/2) x (-b/2, b/2).
class Domain {
public:
    static Domain interval(double a);
    static Domain rectangle(double a, double b);

    bool is_interval() const { return !rect_; }
    bool is_rectangle() const { return rect_; }
    double a() const { return a_; }
    double b() const { return b_; }
    double volume() const { return rect_ ? a_ * b_ : a_; }

    // Closed-domain membership with a relative tolerance of a few ulps.
    bool contains(Point p) const;
    void require_contains(Point p) const;

private:
    Domain(double a, double b, bool rect) : a_(a), b_(b), rect_(rect) {}
    double a_;
    double b_;
    bool rect_;
};

}  // namespace helmspec
