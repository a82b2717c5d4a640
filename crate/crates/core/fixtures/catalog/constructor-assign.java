class Profile {
    String authorname;

    Profile() {
        authorname = Configuration.getString(Argo.KEY_USER_FULLNAME);
    }
}
