from .builder import (TestCase, CASES, gen_case, case_circle, case_ellipse, case_intersecting_circles,
                      case_square, case_multi_circle)
