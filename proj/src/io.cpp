namespace hhg {}
