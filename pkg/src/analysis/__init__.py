# Analysis module for the Wright Algebra Toolkit