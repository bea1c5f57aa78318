"""skelsign recognizes hand gestures in 3D skeleton sequences and explains its decisions."""
