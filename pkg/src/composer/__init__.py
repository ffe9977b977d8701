"""Output composer - heatmap, PGM image, profile tables and gnuplot scripts."""
