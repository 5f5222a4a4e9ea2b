"""Elementary integration of F(t)/R(t)^(1/2), F(t)/R(t)^(1/3) and F(t)/R(t)^(2/3)."""
from .exprio import parse_integrand
from .pipeline import diagnose, integrate, verify
