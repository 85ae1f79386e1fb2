from experiments.plot_triangles import grid_triangles
