"""
File formats: PLY point clouds, OBJ meshes, model weight files, dataset CSV
and trial reports. Import the submodules directly.
"""
