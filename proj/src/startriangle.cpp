namespace rcm {}
