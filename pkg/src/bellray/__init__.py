"""Bell polynomials: exact evaluation and ray-method asymptotics."""
