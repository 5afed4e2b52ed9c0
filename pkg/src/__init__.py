# Wright Algebra Toolkit Package