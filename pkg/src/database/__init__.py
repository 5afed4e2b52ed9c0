# Database module